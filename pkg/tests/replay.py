"""Pure-integer replay of permutation/phase circuits.

Independent oracle for the circuit builders: propagates a basis index
through X-type gates with Python bit arithmetic and tracks the phase sign
from Z-type gates. Never touches the state-vector engine, so agreement
between the two is meaningful evidence.
"""


def permutation_action(circuit, index: int) -> tuple[int, int]:
    """Return (output basis index, phase sign) for one basis input."""
    sign = 1
    for g in circuit.gates:
        active = all(((index >> c) & 1) == (0 if c in g.negated_controls else 1)
                     for c in g.controls)
        if g.kind in ("X", "CNOT", "CCX", "MCX"):
            if active:
                index ^= 1 << g.targets[0]
        elif g.kind in ("Z", "MCZ"):
            if active and (index >> g.targets[0]) & 1:
                sign = -sign
        else:
            raise ValueError(f"replay only covers permutation/phase gates, not {g.kind}")
    return index, sign
