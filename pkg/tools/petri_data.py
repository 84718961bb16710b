"""The 22 genus-4 canonical models (cubic, quadric) transcribed from the
published table, as sympy-ready strings."""

PETRI = {
    70: (
        "x**2*w - 7*x*w**2 - y**3 + 3*y**2*z + 2*y**2*w - 3*y*z**2 - 16*y*z*w"
        " + 28*y*w**2 + z**3 + 11*z**2*w - 19*z*w**2 - 27*w**3",
        "x*z - y**2 + 8*y*w - z**2 - 10*z*w - 9*w**2",
    ),
    82: (
        "x**2*w - 2*x*y*w - 5*x*w**2 - y*z**2 + 5*y*z*w + y*w**2 + 2*z**3"
        " - 12*z**2*w + 23*z*w**2 - 9*w**3",
        "x*z - 3*x*w - y**2 + 2*y*z - 4*z**2 + 10*z*w - 4*w**2",
    ),
    84: (
        "x**2*w - 2*x*y*w - 5*x*w**2 - y**2*z - y**2*w + 3*y*z**2 + 6*y*z*w"
        " + 5*y*w**2 - 2*z**3 - 6*z**2*w + 4*z*w**2 + 4*w**3",
        "x*z - x*w - y**2 + 2*y*z + y*w - 3*z**2 + w**2",
    ),
    88: (
        "x**2*z - x*y**2 - x*y*z - 2*x*z**2 + y**3 + 6*y**2*z - 9*y**2*w"
        " - 8*y*z**2 + 33*y*w**2 + 5*z**3 + 6*z**2*w - 12*z*w**2 - 30*w**3",
        "x*w - y*z + y*w + z**2 - z*w - 5*w**2",
    ),
    90: (
        "x**2*w - 2*x*y*w - 3*x*w**2 - y**2*z - y**2*w + 3*y*z**2 + 6*y*z*w"
        " + 3*y*w**2 - 2*z**3 - 5*z**2*w + z*w**2",
        "x*z - x*w - y**2 + 2*y*z + y*w - 3*z**2",
    ),
    93: (
        "x**2*z - x*y**2 - x*y*z - 2*x*z**2 + y**3 + 7*y**2*z - 11*y**2*w"
        " - 10*y*z**2 + 7*y*z*w + 29*y*w**2 + 6*z**3 + 2*z**2*w - 16*z*w**2"
        " - 21*w**3",
        "x*w - y*z + y*w + z**2 - 2*z*w - 3*w**2",
    ),
    108: (
        "x**2*w - 3*x*w**2 - y**3 + 2*y**2*z - 8*y*z*w + 12*y*w**2 - 2*z**3"
        " + 12*z**2*w - 22*z*w**2 + 5*w**3",
        "x*z - y**2 + 4*y*w - 6*z*w - w**2",
    ),
    115: (
        "x**2*z - x*y**2 - x*y*z - 2*x*z**2 + y**3 + 5*y**2*z - 9*y**2*w"
        " - 4*y*z**2 - 6*y*z*w + 29*y*w**2 + 2*z**3 + 5*z**2*w - 22*w**3",
        "x*w - y*z + y*w + z**2 - 4*w**2",
    ),
    116: (
        "x**2*z - x*y**2 - 2*x*z**2 + 4*y**2*z + 2*y**2*w - 6*y*z**2 - 8*y*z*w"
        " + 3*y*w**2 + 4*z**3 + 9*z**2*w - 4*z*w**2 - 4*w**3",
        "x*w - y*z + z**2 - 3*w**2",
    ),
    117: (
        "x**2*w - x*y*w - 5*x*w**2 - y**2*z + y**2*w + y*z**2 + y*z*w + y*w**2"
        " - z**3 + 2*z*w**2 + 4*w**3",
        "x*z - y**2 + y*z + y*w - 3*z**2 + 2*z*w - 4*w**2",
    ),
    129: (
        "x**2*z - x*y**2 - 2*x*z**2 + 5*y**2*z - 7*y*z**2 - 3*y*z*w + 3*y*w**2"
        " + 4*z**3 + 3*z**2*w - 3*z*w**2 - w**3",
        "x*w - y*z + z**2 - z*w - w**2",
    ),
    135: (
        "x**2*w - 2*x*y*w - 3*x*w**2 - y**3 + 3*y**2*z + 2*y**2*w - 3*y*z**2"
        " + 2*y*w**2 + z**3 + w**3",
        "x*z - 2*x*w - y**2 + 2*y*z + 3*y*w - 2*z**2 - z*w",
    ),
    137: (
        "x**2*z - x*y**2 - x*z**2 + 3*y**2*z + 2*y**2*w - 6*y*z**2 - y*z*w"
        " - 3*y*w**2 + 3*z**3 + 2*z**2*w - z*w**2 + 2*w**3",
        "x*w - y*z + z**2 - z*w - w**2",
    ),
    147: (
        "x**2*w - x*y*w - 6*x*w**2 - y**2*z + y*z**2 + 2*y*w**2 - z**3 + z**2*w"
        " + 3*z*w**2 + 7*w**3",
        "x*z - x*w - y**2 + y*z - 2*z**2 + z*w + w**2",
    ),
    155: (
        "x**2*z - x*y**2 - x*y*z - x*z**2 + y**3 + 3*y**2*z - 5*y**2*w"
        " - 2*y*z**2 + 2*y*z*w + 7*y*w**2 + z**3 - 2*z*w**2 - 3*w**3",
        "x*w - y*z + y*w - 2*w**2",
    ),
    159: (
        "x**2*z - x*y**2 + x*y*z - 3*x*z**2 + 2*y**2*z + y**2*w - 8*y*z*w"
        " + 3*y*w**2 + 7*z**2*w - z*w**2 - 2*w**3",
        "x*w - y*w - z**2 + 2*z*w - 2*w**2",
    ),
    161: (
        "x**2*w - 5*x*w**2 - y**2*z + y*z**2 + 2*y*w**2 - 3*z**2*w + 9*z*w**2"
        " - 4*w**3",
        "x*z - x*w - y**2 + 3*y*w - z**2 + z*w - 3*w**2",
    ),
    173: (
        "x**2*w - x*y*w + 6*x*w**2 - 2*y**2*w - y*z**2 + 4*y*z*w + 6*y*w**2"
        " + 4*z**2*w - 17*z*w**2 - 6*w**3",
        "x*z + 2*x*w - y**2 + y*z + 3*y*w - 6*z*w - 3*w**2",
    ),
    199: (
        "x**2*w + 2*x*y*w + x*w**2 - y**3 - y**2*z + 2*y**2*w + y*z**2"
        " - 5*y*z*w + 3*z*w**2 - 5*w**3",
        "x*z + 2*x*w - y**2 - 2*y*z + 3*y*w - 4*w**2",
    ),
    215: (
        "x**2*z - x*y**2 - x*y*z - x*z**2 + y**3 + 2*y**2*z - 3*y**2*w"
        " - 2*y*z*w + 5*y*w**2 + z**3 - z**2*w + z*w**2 - 2*w**3",
        "x*w - y*z + y*w + z*w - 2*w**2",
    ),
    251: (
        "x**2*w - 5*x*w**2 - y**2*z - y**2*w + y*z**2 + y*w**2 + z**2*w"
        " - z*w**2 + 4*w**3",
        "x*z - 2*x*w - y**2 + y*w + w**2",
    ),
    311: (
        "x**2*w - x*y*w - y**3 + y**2*z + 2*y**2*w - y*z**2 - 2*y*z*w - y*w**2"
        " + z**2*w",
        "x*z - x*w - y**2 + y*z + 2*y*w - z**2 - 2*z*w",
    ),
}
