"""Reference matrices and operator listings for the four worked scenarios.

Values are transcribed as published.  Operators written as sums of
``|row><col|`` terms are entered with :func:`ketbra` so that each line can be
checked against the printed listing by eye.  Bit strings are big-endian:
``"10"`` is ``|1>`` on the first factor and ``|0>`` on the second.
"""

from __future__ import annotations

import numpy as np

R2, R3, R6 = 1 / np.sqrt(2), 1 / np.sqrt(3), 1 / np.sqrt(6)


def ketbra(n_bits: int, terms, scale: complex = 1) -> np.ndarray:
    """Sum of ``coef * |row><col|`` over ``terms = [(coef, row, col), ...]``."""
    d = 2 ** n_bits
    m = np.zeros((d, d), dtype=complex)
    for coef, row, col in terms:
        if len(row) != n_bits or len(col) != n_bits:
            raise ValueError(f"bit strings must have length {n_bits}: {row!r}, {col!r}")
        m[int(row, 2), int(col, 2)] += coef
    return scale * m


def ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) * R2
CNOT = ketbra(2, [(1, "00", "00"), (1, "01", "01"), (1, "10", "11"), (1, "11", "10")])

# --- Bell: U = CNOT (H x I) on |00>, system = qubit 1, environment = qubit 2 ---

BELL_U = ketbra(2, [(1, "00", "00"), (1, "00", "10"), (1, "01", "01"), (1, "01", "11"),
                    (1, "10", "01"), (1, "11", "00"), (-1, "11", "10"), (-1, "10", "11")], R2)
BELL_U1 = ketbra(2, [(1, "00", "00"), (1, "00", "10"), (1, "01", "01"), (1, "01", "11"),
                     (1, "10", "00"), (-1, "10", "10"), (1, "11", "01"), (-1, "11", "11")], R2)
BELL_U2 = CNOT.copy()

BELL_KRAUS = {
    (0, "system"): [ketbra(1, [(1, "0", "0"), (1, "0", "1"), (1, "1", "0"), (-1, "1", "1")], R2),
                    np.zeros((2, 2), dtype=complex)],
    (0, "environment"): [ketbra(1, [(1, "0", "0"), (1, "1", "1")], R2),
                         ketbra(1, [(1, "0", "0"), (1, "1", "1")], R2)],
    (1, "system"): [ketbra(1, [(1, "0", "0")]), ketbra(1, [(1, "1", "1")])],
    (1, "environment"): [ketbra(1, [(1, "0", "0"), (1, "0", "1"), (1, "1", "0"), (1, "1", "1")], 0.5),
                         ketbra(1, [(1, "0", "0"), (-1, "0", "1"), (-1, "1", "0"), (1, "1", "1")], 0.5)],
}
BELL_STAGE_INPUTS = [ket("00"), np.kron((ket("0") + ket("1")) * R2, ket("0"))]

# --- GHZ: U = (I x CNOT)(CNOT x I)(H x I x I) on |000>, system = qubits 1-2 ---

GHZ_U = ketbra(3, [(1, "000", "000"), (1, "000", "100"), (1, "001", "001"), (1, "001", "101"),
                   (1, "010", "011"), (1, "010", "111"), (1, "011", "010"), (1, "011", "110"),
                   (1, "100", "010"), (-1, "100", "110"), (1, "101", "011"), (-1, "101", "111"),
                   (1, "110", "001"), (-1, "110", "101"), (1, "111", "000"), (-1, "111", "100")], R2)
GHZ_U1 = ketbra(3, [(1, "000", "000"), (1, "001", "001"), (1, "010", "010"), (1, "011", "011"),
                    (-1, "100", "100"), (-1, "101", "101"), (-1, "110", "110"), (-1, "111", "111"),
                    (1, "000", "100"), (1, "001", "101"), (1, "010", "110"), (1, "011", "111"),
                    (1, "100", "000"), (1, "101", "001"), (1, "110", "010"), (1, "111", "011")], R2)
GHZ_U2 = ketbra(3, [(1, "000", "000"), (1, "001", "001"), (1, "010", "010"), (1, "011", "011"),
                    (1, "100", "110"), (1, "101", "111"), (1, "110", "100"), (1, "111", "101")])
GHZ_U3 = ketbra(3, [(1, "000", "000"), (1, "001", "001"), (1, "010", "011"), (1, "011", "010"),
                    (1, "100", "100"), (1, "101", "101"), (1, "110", "111"), (1, "111", "110")])

_Z4 = np.zeros((4, 4), dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)
GHZ_KRAUS = {
    (0, "system"): [ketbra(2, [(1, "00", "00"), (1, "00", "10"), (1, "01", "01"), (1, "01", "11"),
                               (1, "10", "00"), (-1, "10", "10"), (1, "11", "01"),
                               (-1, "11", "11")], R2), _Z4],
    (0, "environment"): [I2 * R2, _Z2, I2 * R2, _Z2],
    (1, "system"): [ketbra(2, [(1, "00", "00"), (1, "01", "01"), (1, "10", "11"),
                               (1, "11", "10")]), _Z4],
    (1, "environment"): [I2 * 0.5, I2 * 0.5, _Z2, I2 * R2],
    (2, "system"): [ketbra(2, [(1, "00", "00"), (1, "10", "10")]),
                    ketbra(2, [(1, "01", "01"), (1, "11", "11")])],
    (2, "environment"): [ketbra(1, [(1, "0", "0"), (1, "0", "1"), (1, "1", "0"), (1, "1", "1")], 0.5),
                         ketbra(1, [(1, "0", "0"), (-1, "0", "1"), (-1, "1", "0"), (1, "1", "1")], 0.5),
                         _Z2, _Z2],
}
GHZ_STAGE_INPUTS = [ket("000"), np.kron((ket("0") + ket("1")) * R2, ket("00")),
                    (ket("000") + ket("110")) * R2]

# --- W: U maps |100> to the W state; system = qubits 1-2, environment = qubit 3 ---

W_U_TERMS = [(1, "000", "000"), (R3, "000", "100"), (-R3, "001", "010"), (R3, "001", "100"),
             (-R3, "010", "001"), (R3, "010", "011"), (R3, "010", "100"), (1, "011", "101"),
             (R3, "100", "010"), (-R3, "100", "011"), (R3, "100", "100"), (1, "101", "110"),
             (R6, "110", "001"), (R6, "110", "010"), (R6, "110", "011"), (R2, "110", "111"),
             (R6, "111", "001"), (R6, "111", "010"), (R6, "111", "011"), (-R2, "111", "111")]
# as printed; not unitary
W_U_LITERAL = ketbra(3, W_U_TERMS)
# the printed term (1/sqrt3)|000><100| read as (1/sqrt3)|001><001|: exactly orthogonal, and
# consistent with the printed U1 = iU^2 and U2 = -iU^-1 listings
W_U_CORRECTED = ketbra(3, [(R3, "001", "001") if t == (R3, "000", "100") else t
                           for t in W_U_TERMS])

W_U1_LISTING = ketbra(3, [
    (1, "000", "000"), (.67, "001", "001"), (-.67, "001", "011"), (.33, "001", "100"),
    (-.33, "010", "001"), (.67, "010", "010"), (-.33, "010", "011"), (.57, "010", "101"),
    (1, "011", "110"), (-.33, "100", "001"), (.33, "100", "010"), (.67, "100", "100"),
    (-.57, "100", "101"), (.41, "101", "001"), (.41, "101", "010"), (.41, "101", "011"),
    (.71, "101", "111"), (.28, "110", "001"), (.053, "110", "010"), (.52, "110", "011"),
    (.471, "110", "100"), (.41, "110", "101"), (-.5, "110", "111"), (-.28, "111", "001"),
    (-.52, "111", "010"), (-.053, "111", "011"), (.471, "111", "100"), (.41, "111", "101"),
    (.5, "111", "111")], 1j)
W_U2_LISTING = ketbra(3, [
    (-1, "000", "000"), (-.57, "001", "001"), (.57, "001", "010"), (-.408, "001", "110"),
    (-.408, "001", "111"), (.577, "010", "001"), (-.577, "010", "100"), (-.408, "010", "110"),
    (-.408, "010", "111"), (-.577, "011", "010"), (.577, "011", "100"), (-.408, "011", "110"),
    (-.408, "011", "111"), (-.577, "100", "001"), (-.577, "100", "010"), (-.577, "100", "100"),
    (-1, "101", "011"), (-1, "110", "101"), (-.707, "111", "110"), (.707, "111", "111")], 1j)

W_INITIAL = ket("100")
# printed input to the second stage (rounded amplitudes, norm != 1)
W_STAGE2_INPUT_PRINTED = 1j * (.33 * ket("001") + .67 * ket("100") + .471 * ket("110")
                               + .471 * ket("111"))
W_SPECTRUM = (0.7791, 0.2209)
W_CHI = np.array([[0.8967, -0.4426], [0.4426, 0.8967]])  # as printed: rows chi+, chi-

W_KRAUS = {
    (0, "system"): [
        ketbra(2, [(1j, "00", "00"), (.67j, "01", "01"), (.33j, "10", "01"), (.67j, "10", "10"),
                   (.053j, "11", "01"), (.471j, "11", "11")]),
        ketbra(2, [(.33j, "00", "10"), (1j, "01", "11"), (.41j, "10", "01"), (-.52j, "11", "01"),
                   (.471j, "11", "10")]),
    ],
    (0, "environment"): [
        ketbra(1, [(.33j, "1", "0")]),
        ketbra(1, [(.57j, "0", "1")]),
        ketbra(1, [(.67j, "0", "0"), (-.57j, "0", "1")]),
        ketbra(1, [(.471j, "0", "0"), (.41j, "0", "1"), (.471j, "1", "0"), (.41j, "1", "1")]),
    ],
    (1, "system"): [
        ketbra(2, [(-.73j, "00", "00"), (.149j, "00", "01"), (-.252j, "00", "11"),
                   (.42j, "01", "00"), (-.149j, "01", "01"), (-.153j, "01", "10"),
                   (-.762j, "01", "11"), (-.42j, "10", "00"), (-.661j, "10", "01"),
                   (-.302j, "10", "10"), (-.728j, "11", "10"), (.0715j, "11", "11")]),
        ketbra(2, [(-.162j, "00", "00"), (.302j, "00", "01"), (-.51j, "00", "11"),
                   (-.207j, "01", "00"), (-.302j, "01", "01"), (.451j, "01", "10"),
                   (-.258j, "01", "11"), (.207j, "10", "00"), (-.579j, "10", "01"),
                   (.149j, "10", "10"), (.359j, "11", "10"), (.145j, "11", "11")]),
    ],
    (1, "environment"): [
        ketbra(1, [(-.079j, "0", "0"), (.509j, "0", "1"), (.027j, "1", "0"), (-.22j, "1", "1")]),
        ketbra(1, [(-.42j, "0", "0"), (.462j, "0", "1"), (.24j, "1", "0"), (-.081j, "1", "1")]),
        ketbra(1, [(-.327j, "0", "0"), (-.581j, "0", "1"), (-.238j, "1", "0"), (.196j, "1", "1")]),
        ketbra(1, [(-.687j, "0", "0"), (-.256j, "0", "1"), (.347j, "1", "0"), (-.17j, "1", "1")]),
    ],
}

# stage-1 S0 with its last term placed where U1 has it
W_STAGE1_SYSTEM_READ = [
    ketbra(2, [(1j, "00", "00"), (.67j, "01", "01"), (.33j, "10", "01"), (.67j, "10", "10"),
               (.053j, "11", "01"), (.471j, "11", "10")]),
    W_KRAUS[(0, "system")][1],
]

# --- transpose ---

B_T = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
# printed listing: D0, D1, D2 positive and F3 negative, unnormalized
T_LISTING_POSITIVE = [ketbra(1, [(1, "0", "0")]), ketbra(1, [(1, "1", "1")]),
                      ketbra(1, [(1, "0", "1"), (1, "1", "0")])]
T_LISTING_NEGATIVE = [ketbra(1, [(1, "1", "0"), (-1, "0", "1")])]

_A_ROWS = [
    "1000000000100000", "0000000000000000", "0100000000010000", "0000000000000000",
    "0000100000000010", "0000000000000000", "0000010000000001", "0000000000000000",
    "0000000000000000", "1000000000100000", "0000000000000000", "0100000000010000",
    "0000000000000000", "0000100000000010", "0000000000000000", "0000010000000001",
]
PT_A_FORM = np.array([[int(c) for c in row] for row in _A_ROWS], dtype=complex)

BELL_VEC = np.array([.5, 0, 0, .5, 0, 0, 0, 0, 0, 0, 0, 0, .5, 0, 0, .5], dtype=complex)
PT_OUTPUT_VEC = np.array([.5, 0, 0, 0, 0, 0, .5, 0, 0, .5, 0, 0, 0, 0, 0, .5], dtype=complex)
PSEUDO_DENSITY = np.array([[.5, 0, 0, 0], [0, 0, .5, 0], [0, .5, 0, 0], [0, 0, 0, .5]],
                          dtype=complex)
BELL_STATE = (ket("00") + ket("11")) * R2
