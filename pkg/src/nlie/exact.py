"""Exact scalars: rationals, univariate polynomials, rational functions,
multivariate polynomials, and a small parser for scalar expressions.

Rationals are plain ``fractions.Fraction`` (ints are accepted everywhere a
rational is).  The polynomial classes compare equal to plain numbers when
they are constant, so generic code can test ``x == 0``.
"""
from __future__ import annotations

import ast
from fractions import Fraction
from math import gcd, lcm
from numbers import Rational as _Rational

Rational = Fraction


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, _Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, (UniPoly, MultiPoly)) and x.is_constant():
        return as_rational(x.constant_term())
    raise TypeError(f"not an exact rational: {x!r}")


def parse_rational(text: str) -> Fraction:
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    try:
        if "/" in s:
            p, q = s.split("/")
            return Fraction(int(p), int(q))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def format_rational(q) -> str:
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def is_zero(x) -> bool:
    return x == 0


def integer_root(a: int, k: int):
    """Exact k-th root of a non-negative int, or None."""
    if a < 0:
        return None
    if a < 2:
        return a
    lo, hi = 0, 1 << (a.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** k < a:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** k == a else None


def rational_roots_of_power(q, k: int) -> list:
    """All rational r with r**k == q."""
    q = as_rational(q)
    if q == 0:
        return [Fraction(0)]
    sign = 1 if q > 0 else -1
    if sign < 0 and k % 2 == 0:
        return []
    a = integer_root(abs(q.numerator), k)
    b = integer_root(q.denominator, k)
    if a is None or b is None:
        return []
    r = Fraction(sign * a, b)
    return [r, -r] if k % 2 == 0 else [r]


# ---------------------------------------------------------------- univariate

class UniPoly:
    """Polynomial in one named variable with rational coefficients,
    stored lowest degree first with no trailing zeros."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs=(), var: str = "t"):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def x(cls, var="t"):
        return cls((0, 1), var)

    @classmethod
    def const(cls, c, var="t"):
        return cls((c,), var)

    @classmethod
    def from_strings(cls, items, var="t"):
        return cls([parse_rational(s) for s in items], var)

    def to_strings(self):
        return [format_rational(c) for c in self.coeffs]

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def leading(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def constant_term(self):
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __bool__(self):
        return bool(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, UniPoly):
            if other.var != self.var and not (other.is_constant() or self.is_constant()):
                raise ValueError(f"variable mismatch: {self.var} vs {other.var}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return UniPoly((other,), self.var)
        return NotImplemented

    def _var_with(self, o):
        return self.var if not self.is_constant() else o.var

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        k = max(len(a), len(b))
        return UniPoly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                        for i in range(k)], self._var_with(o))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.var)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return UniPoly((), self._var_with(o))
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return UniPoly(out, self._var_with(o))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            if isinstance(k, int):
                return RationalFunction(self) ** k
            raise ValueError("exponent must be an int")
        out = UniPoly((1,), self.var)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return UniPoly([c / other for c in self.coeffs], self.var)
        if isinstance(other, (UniPoly, RationalFunction)):
            return RationalFunction(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return RationalFunction(UniPoly((other,), self.var)) / self
        return NotImplemented

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = o.degree()
        lb = o.leading()
        q = [Fraction(0)] * max(len(r) - db, 0)
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i] / lb
            if c:
                q[i - db] = c
                for j, bc in enumerate(o.coeffs):
                    r[i - db + j] -= c * bc
        var = self._var_with(o)
        return UniPoly(q, var), UniPoly(r[:db] if db > 0 else [], var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        if self.is_zero():
            return self
        return self / self.leading()

    def gcd(self, other):
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    evaluate = __call__

    def derivative(self):
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def valuation(self) -> int:
        """Order of vanishing at 0."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ValueError("valuation of zero polynomial")

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs and (self.var == other.var or self.is_constant())
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.coeffs == UniPoly((other,)).coeffs
        if isinstance(other, RationalFunction):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_term())
        return hash((self.coeffs, self.var))

    def __repr__(self):
        return f"UniPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if mono and abs(c) == 1:
                s = mono
            else:
                s = format_rational(abs(c)) + ("*" + mono if mono else "")
            parts.append(("-" if c < 0 else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sg, s in parts[1:]:
            out += f" {sg} {s}"
        return out


class RationalFunction:
    """Quotient of UniPolys kept in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, UniPoly):
            num = UniPoly((as_rational(num),), den.var if isinstance(den, UniPoly) else "t")
        if den is None:
            den = UniPoly((1,), num.var)
        elif not isinstance(den, UniPoly):
            den = UniPoly((as_rational(den),), num.var)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = UniPoly((), num.var), UniPoly((1,), num.var)
            return
        g = num.gcd(den)
        num, den = num // g, den // g
        lc = den.leading()
        self.num, self.den = num / lc, den / lc

    @property
    def var(self):
        return self.num.var if not self.num.is_constant() else self.den.var

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, UniPoly):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return RationalFunction(UniPoly((other,), self.var))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(self.den, self.num) ** (-k) if self.num else 1 / self
        return RationalFunction(self.num ** k, self.den ** k)

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_polynomial(self):
        return self.den.degree() == 0

    def pole_order_at_zero(self) -> int:
        """Multiplicity of t in the reduced denominator (0 if finite at 0)."""
        return self.den.valuation()

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num(x) / d

    evaluate = __call__

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, RationalFunction) else other
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.den.degree() == 0:
            return hash(self.num)
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"


# -------------------------------------------------------------- multivariate

def _add_into(d, k, c):
    v = d.get(k, 0) + c
    if v:
        d[k] = v
    else:
        d.pop(k, None)


class MultiPoly:
    """Sparse polynomial in ``len(names)`` variables; terms maps exponent
    tuples to int/Fraction coefficients."""

    __slots__ = ("terms", "names")

    def __init__(self, terms=None, names=("x1", "x2", "x3")):
        self.names = tuple(names)
        t = {}
        if terms:
            k = len(self.names)
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != k:
                    raise ValueError("exponent length mismatch")
                if isinstance(c, Fraction) and c.denominator == 1:
                    c = c.numerator
                if c:
                    t[e] = c
        self.terms = t

    @classmethod
    def _raw(cls, terms, names):
        p = object.__new__(cls)
        p.terms = terms
        p.names = names
        return p

    @classmethod
    def var(cls, i, names=("x1", "x2", "x3")):
        e = [0] * len(names)
        e[i] = 1
        return cls({tuple(e): 1}, names)

    @classmethod
    def const(cls, c, names=("x1", "x2", "x3")):
        return cls({(0,) * len(names): c}, names)

    @classmethod
    def monomial(cls, exps, coeff=1, names=None):
        names = names or tuple(f"x{i + 1}" for i in range(len(exps)))
        return cls({tuple(exps): coeff}, names)

    @property
    def nvars(self):
        return len(self.names)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or list(self.terms) == [(0,) * self.nvars]

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.names != self.names:
                raise ValueError("variable mismatch")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MultiPoly.const(other, self.names)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t = dict(self.terms)
        for e, c in o.terms.items():
            _add_into(t, e, c)
        return MultiPoly._raw(t, self.names)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({e: -c for e, c in self.terms.items()}, self.names)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t = dict(self.terms)
        for e, c in o.terms.items():
            _add_into(t, e, -c)
        return MultiPoly._raw(t, self.names)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e, 0) + c1 * c2
                if v:
                    t[e] = v
                else:
                    t.pop(e, None)
        return MultiPoly._raw(t, self.names)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
            return MultiPoly({e: Fraction(v) / c for e, v in self.terms.items()}, self.names)
        return NotImplemented

    def __pow__(self, k: int):
        out = MultiPoly.const(1, self.names)
        for _ in range(k):
            out = out * self
        return out

    def partial(self, i: int):
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                t[tuple(e2)] = c * e[i]
        return MultiPoly._raw(t, self.names)

    def gradient(self):
        return [self.partial(i) for i in range(self.nvars)]

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        acc = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x ** k
            acc = acc + v
        return acc

    evaluate = __call__

    def substitute(self, i: int, value):
        """Replace variable i by a polynomial (same variable set)."""
        out = MultiPoly({}, self.names)
        value = self._coerce(value)
        powers = {}
        for e, c in self.terms.items():
            k = e[i]
            if k not in powers:
                powers[k] = value ** k
            e2 = list(e)
            e2[i] = 0
            out = out + MultiPoly({tuple(e2): c}, self.names) * powers[k]
        return out

    def shift(self, i: int, c):
        """p(.., x_i + c, ..)."""
        return self.substitute(i, MultiPoly.var(i, self.names) + c)

    def reduce_power(self, i: int, k: int, replacement):
        """Rewrite x_i**k -> replacement repeatedly (quotient by a monic
        relation in x_i)."""
        replacement = self._coerce(replacement)
        p = self
        while True:
            high = {e: c for e, c in p.terms.items() if e[i] >= k}
            if not high:
                return p
            low = MultiPoly._raw({e: c for e, c in p.terms.items() if e[i] < k}, self.names)
            acc = low
            for e, c in high.items():
                e2 = list(e)
                e2[i] -= k
                acc = acc + MultiPoly({tuple(e2): c}, self.names) * replacement
            p = acc

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.names == other.names and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_term())
        return hash((frozenset(self.terms.items()), self.names))

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
            c = self.terms[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(self.names, e) if k)
            if mono:
                s = mono if c == 1 else ("-" + mono if c == -1 else f"{format_rational(c)}*{mono}")
            else:
                s = format_rational(c)
            out.append(s)
        return " + ".join(out).replace("+ -", "- ")


def determinant(mat):
    """Determinant by cofactor expansion; entries of any commutative ring."""
    k = len(mat)
    if k == 0:
        return 1
    if k == 1:
        return mat[0][0]
    if k == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    total = 0
    for j in range(k):
        if mat[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


# ---------------------------------------------------------------- parsing

_BINOPS = {ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b,
           ast.Mult: lambda a, b: a * b, ast.Pow: lambda a, b: a ** b}


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def evaluate_expression(text: str, env=None):
    """Evaluate an exact scalar expression such as ``"t^2-4"`` or
    ``"a*d-b*c"``.  Names resolve through ``env``; only + - * / ^ and
    integer literals are allowed."""
    env = env or {}
    src = text.replace("^", "**").strip()
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"malformed expression {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise ValueError(f"unknown name {node.id!r} in {text!r}")
            return env[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Div):
                return _div(a, b)
            if isinstance(node.op, ast.Pow):
                if not isinstance(b, int):
                    raise ValueError("exponent must be an integer literal")
                if isinstance(a, int) and b < 0:
                    return Fraction(a) ** b
            op = _BINOPS.get(type(node.op))
            if op is None:
                raise ValueError(f"operator not allowed in {text!r}")
            return op(a, b)
        if isinstance(node, ast.Compare) and len(node.ops) == 1:
            a, b = ev(node.left), ev(node.comparators[0])
            if isinstance(node.ops[0], ast.NotEq):
                return a != b
            if isinstance(node.ops[0], ast.Eq):
                return a == b
        raise ValueError(f"unsupported syntax in {text!r}")

    v = ev(tree)
    if isinstance(v, int) and not isinstance(v, bool):
        return Fraction(v)
    return v


def parse_scalar(text: str, mode: str = "rational"):
    """Parse a scalar for the given mode: ``"rational"`` or ``"poly:<var>"``."""
    if mode == "rational":
        return parse_rational(text) if _plain_rational(text) else as_rational(evaluate_expression(text))
    if mode.startswith("poly:"):
        var = mode[5:]
        if not var.isidentifier():
            raise ValueError(f"bad variable name {var!r}")
        v = evaluate_expression(text, {var: UniPoly.x(var)})
        if isinstance(v, Fraction):
            return UniPoly((v,), var)
        if isinstance(v, RationalFunction):
            if not v.is_polynomial():
                raise ValueError(f"{text!r} is not a polynomial")
            return v.num / v.den.constant_term()
        return v
    raise ValueError(f"unknown scalar mode {mode!r}")


def _plain_rational(s):
    s = s.strip().lstrip("-")
    return s.replace("/", "", 1).isdigit()


def common_denominator(values) -> int:
    d = 1
    for v in values:
        if isinstance(v, Fraction):
            d = lcm(d, v.denominator)
    return d


__all__ = ["Rational", "as_rational", "parse_rational", "format_rational", "UniPoly",
           "RationalFunction", "MultiPoly", "determinant", "evaluate_expression",
           "parse_scalar", "rational_roots_of_power", "integer_root", "common_denominator",
           "is_zero", "gcd"]
