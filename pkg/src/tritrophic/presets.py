"""Reference parameter sets, used by the tests and the CLI ``--preset`` flag.

All four share v0, d0 = d1 = d2, a1, v3, c3 and d3, hence the same
equilibrium intermediate-predator density Y* = v3/c3 - d3.
"""

from .model import OriginalParams

_BASE = dict(v0=1.0, d0=10.0, d1=10.0, d2=10.0, a1=1.0, v1=2.0, v2=0.405, v3=1.0, c3=0.038, d3=20.0)

#: interior equilibrium with three negative real eigenvalues
STABLE_NODE = OriginalParams(a0=1.2, b0=0.075, **_BASE)
#: interior equilibrium with a stable complex pair; with a0 swept over
#: [1.6, 2.1] this is the period-doubling cascade set
STABLE_FOCUS = OriginalParams(a0=0.95, b0=0.06, **_BASE)
#: interior equilibrium with an unstable complex pair
UNSTABLE_FOCUS = STABLE_NODE.replace(v1=10.0, v2=2.5, a0=1.5)
#: interior equilibrium meeting the global Lyapunov sign conditions
GLOBALLY_STABLE = STABLE_NODE.replace(b0=0.15, v2=2.5, a0=2.0)

PRESETS = {
    "stable-node": STABLE_NODE,
    "stable-focus": STABLE_FOCUS,
    "unstable-focus": UNSTABLE_FOCUS,
    "globally-stable": GLOBALLY_STABLE,
}

DEFAULT_INITIAL = (1.2, 1.2, 1.2)

GLOBALLY_STABLE_INITIALS = (
    (1.2, 1.2, 1.2),
    (10.1, 30.1, 3.0),
    (30.0, 10.0, 5.0),
    (25.0, 5.0, 1.0),
    (22.0, 5.0, 4.0),
    (18.0, 15.0, 8.0),
    (12.0, 20.0, 2.0),
    (5.0, 30.0, 6.0),
)
