"""Pure-Python kernel: one big int holds a whole chunk of the truth table."""

OP_TRUE, OP_FALSE, OP_NOT, OP_AND, OP_OR = 0, 1, 2, 3, 4
OP_VAR = 8

# valuations evaluated in parallel per chunk (2**CHUNK_BITS bits per int)
CHUNK_BITS = 14

_pattern_cache = {}


def _patterns(nlow):
    hit = _pattern_cache.get(nlow)
    if hit is not None:
        return hit
    size = 1 << nlow
    full = (1 << size) - 1
    pats = []
    for j in range(nlow):
        half = 1 << j
        p = ((1 << half) - 1) << half
        period = half << 1
        while period < size:
            p |= p << period
            period <<= 1
        pats.append(p)
    _pattern_cache[nlow] = (pats, full)
    return pats, full


def _run(prog, pats, high, nlow, full):
    try:
        return _exec(prog, pats, high, nlow, full)
    except IndexError:  # stack underflow
        raise ValueError("malformed program") from None


def _exec(prog, pats, high, nlow, full):
    stack = []
    push = stack.append
    pop = stack.pop
    for op in prog:
        if op >= OP_VAR:
            j = op - OP_VAR
            if j < nlow:
                push(pats[j])
            else:
                push(full if (high >> (j - nlow)) & 1 else 0)
        elif op == OP_AND:
            b = pop()
            push(pop() & b)
        elif op == OP_OR:
            b = pop()
            push(pop() | b)
        elif op == OP_NOT:
            push(pop() ^ full)
        elif op == OP_TRUE:
            push(full)
        elif op == OP_FALSE:
            push(0)
        else:
            raise ValueError("bad opcode %r" % op)
    if len(stack) != 1:
        raise ValueError("malformed program")
    return stack[0]


def truth_table(prog, nvars):
    """Bit ``i`` of the result is the formula's value under valuation ``i``."""
    nlow = min(nvars, CHUNK_BITS)
    pats, full = _patterns(nlow)
    out = 0
    shift = 1 << nlow
    for high in range(1 << (nvars - nlow)):
        out |= _run(prog, pats, high, nlow, full) << (high * shift)
    return out


def is_sat(prog, nvars):
    nlow = min(nvars, CHUNK_BITS)
    pats, full = _patterns(nlow)
    for high in range(1 << (nvars - nlow)):
        if _run(prog, pats, high, nlow, full):
            return True
    return False
