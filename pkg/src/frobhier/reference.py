"""Reference D-hierarchy equations.

``DISPLAYED_D_FLOWS`` holds the equations as they are usually displayed: flow-2
entries show only the factor multiplying ``q = d_0 d_1 f``.  Two displayed
flow-2 entries disagree with the potential; ``D_FLOWS`` holds the values the
pipeline produces, which also pass the compatibility and weight-support checks.
Keys are ``(a, b)``; flow 2 is ``(0, b)``.
"""

DISPLAYED_D_FLOWS = {
    (2, 2): "1/12*p1^3 - 1/2*p1*p2 + p3",
    (2, 3): "1/4*p1^2*p2 - 1/2*p1*p3 - 1/2*p2^2 + p4",
    (2, 4): "1/4*p1^2*p3 + 1/4*p1*p2^2 - 1/2*p1*p4 - p2*p3 + p5",
    (3, 3): "1/80*p1^5 - 1/8*p1^3*p2 + 1/4*p1^2*p3 + 3/4*p1*p2^2 - 1/2*p1*p4 - 3/2*p2*p3 + p5",
    (0, 2): "1/2*p1",
    (0, 3): "1/2*p1^2 + 1/2*p2",
    (0, 4): "1/8*p1^3 + 1/2*p1*p2 + 1/2*p3",
    (0, 5): "1/16*p1^4 + 3/8*p1^2*p2 + 1/4*p2^2 + 1/2*p2*p3 + 1/2*p4",
}

D_FLOWS = dict(DISPLAYED_D_FLOWS)
D_FLOWS[(0, 3)] = "1/4*p1^2 + 1/2*p2"
D_FLOWS[(0, 5)] = "1/16*p1^4 + 3/8*p1^2*p2 + 1/2*p1*p3 + 1/4*p2^2 + 1/2*p4"
