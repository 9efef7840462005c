'''Exception types raised across pbwcrystal.'''


class InvalidTypeError(ValueError):
    '''Unknown Cartan type letter or rank out of bounds.'''


class UnsupportedTypeError(ValueError):
    '''The type would need braid moves of more than four letters (G2).'''


class InvalidWordError(ValueError):
    '''A word is not a reduced word of the longest element.'''


class IllegalMoveError(ValueError):
    '''A braid move does not apply at the requested position.'''


class OrderError(ValueError):
    '''A root sequence is not a realizable convex order, or hybrid prefixes disagree.'''


class TransitionError(ValueError):
    '''A braid window failed its root sum identities.'''


class DatumError(ValueError):
    '''A Lusztig datum does not match its order.'''


class PlanError(ValueError):
    '''A bracket plan is invalid or belongs to a different order.'''


class SearchBudgetExceeded(RuntimeError):
    '''The simply braided search visited more states than the node cap allows.'''

    def __init__(self, node_cap, visited):
        super().__init__(f"search budget exceeded: visited {visited} states with node cap {node_cap}")
        self.node_cap = node_cap
        self.visited = visited
