"""Pure-Python join kernel; same interface as the compiled ``_kernel`` module.

A plan is a list of steps evaluated left to right over an integer binding
vector. Every value is an interned constant id; argument *sources* are
encoded as ``src >= 0`` (variable slot) or ``src < 0`` (constant ``-src - 1``).

Step layouts::

    (ATOM, key_srcs, checks, binds)   source: rows iterable or {key: [rows]}
    (NEG,  arg_srcs)                  source: set of rows
    (CMP,  op, left_src, right_src)   source: unused

``checks`` and ``binds`` are flat tuples ``(pos, src, pos, src, ...)`` and
``(pos, slot, ...)``. Index keys are bare ints for one key column and
tuples otherwise.
"""

ATOM, NEG, CMP = 0, 1, 2
LT, LE, GT, GE, EQ, NE = range(6)


class Plan:
    def __init__(self, steps, sources, head, nvars):
        self.steps = [tuple(s) for s in steps]
        self.sources = list(sources)
        self.head = tuple(head)
        self.nvars = nvars

    def set_source(self, i, source):
        self.sources[i] = source

    def run(self, out):
        """Add every head tuple derivable under the plan to the set ``out``."""
        b = [0] * self.nvars
        steps, sources, head = self.steps, self.sources, self.head
        n = len(steps)

        def val(src):
            return b[src] if src >= 0 else -src - 1

        def go(d):
            if d == n:
                out.add(tuple([b[s] if s >= 0 else -s - 1 for s in head]))
                return
            step = steps[d]
            kind = step[0]
            if kind == ATOM:
                key_srcs, checks, binds = step[1], step[2], step[3]
                src = sources[d]
                if key_srcs:
                    if len(key_srcs) == 1:
                        rows = src.get(val(key_srcs[0]))
                    else:
                        rows = src.get(tuple([val(s) for s in key_srcs]))
                    if rows is None:
                        return
                else:
                    rows = src
                nchk, nbind = len(checks), len(binds)
                for row in rows:
                    ok = True
                    # binds go first so that checks may refer to a slot bound in this row
                    for j in range(0, nbind, 2):
                        b[binds[j + 1]] = row[binds[j]]
                    for j in range(0, nchk, 2):
                        if row[checks[j]] != val(checks[j + 1]):
                            ok = False
                            break
                    if ok:
                        go(d + 1)
            elif kind == NEG:
                if tuple([val(s) for s in step[1]]) not in sources[d]:
                    go(d + 1)
            else:
                op, x, y = step[1], val(step[2]), val(step[3])
                if op == LT:
                    ok = x < y
                elif op == LE:
                    ok = x <= y
                elif op == GT:
                    ok = x > y
                elif op == GE:
                    ok = x >= y
                elif op == EQ:
                    ok = x == y
                else:
                    ok = x != y
                if ok:
                    go(d + 1)

        go(0)
        return len(out)
