"""Executable reference for the ChaCha quarter round and double round.

All values are unsigned 32-bit words; the state is a tuple of sixteen words.
The rotation in line_snd is written as a shift/or pair (left shift by s OR'd
with a logical right shift by 32-s), which equals a left rotation for
1 <= s <= 31.
"""

MASK32 = 0xFFFFFFFF

# column and diagonal index quadruples of the standard double round
COLUMNS = ((0, 4, 8, 12), (1, 5, 9, 13), (2, 6, 10, 14), (3, 7, 11, 15))
DIAGONALS = ((0, 5, 10, 15), (1, 6, 11, 12), (2, 7, 8, 13), (3, 4, 9, 14))


def chacha_line_fst(a, b):
    return (a + b) & MASK32


def chacha_line_snd(a, d, s):
    x = (a ^ d) & MASK32
    s &= MASK32
    left = (x << s) & MASK32 if s < 32 else 0
    t = (32 - s) & MASK32
    right = x >> t if t < 32 else 0
    return left | right


def chacha_quarter_round(a, b, c, d):
    a = chacha_line_fst(a, b)
    d = chacha_line_snd(a, d, 16)
    c = chacha_line_fst(c, d)
    b = chacha_line_snd(c, b, 12)
    a = chacha_line_fst(a, b)
    d = chacha_line_snd(a, d, 8)
    c = chacha_line_fst(c, d)
    b = chacha_line_snd(c, b, 7)
    return a, b, c, d


def _round_over(state, quads):
    out = list(state)
    for ia, ib, ic, id_ in quads:
        out[ia], out[ib], out[ic], out[id_] = chacha_quarter_round(
            out[ia], out[ib], out[ic], out[id_])
    return tuple(out)


def column_round(state):
    return _round_over(state, COLUMNS)


def diagonal_round(state):
    return _round_over(state, DIAGONALS)


def double_round(state):
    return diagonal_round(column_round(state))
