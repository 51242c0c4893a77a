"""Financial network model and clearing engine.

A network is a set of banks with cash, a sparse liability matrix, a default
cost parameter beta in [0, 1], and optionally a central bank that holds
senior claims.  Clearing computes the greatest recovery-rate vector: the
fixed point of the payment update where solvent banks pay in full and a
defaulted bank pays out a beta share of its total assets, senior claims
first, the rest pro rata on junior debt.

All arithmetic is exact rational, so solvency boundaries, fixed-point
checks and the strict inequalities in generated hardness instances never
suffer rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .money import Money

ZERO = Fraction(0)
ONE = Fraction(1)


class BailnetError(Exception):
    """Base class for engine errors."""


class InvalidNetworkError(BailnetError):
    """Raised when an operation is asked to run on a non-validating network."""

    def __init__(self, violations: list["Violation"]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


class UnknownBankError(BailnetError):
    pass


class CapacityError(BailnetError):
    """Instance exceeds a configured size or time cap."""


@dataclass(frozen=True)
class Violation:
    rule: str
    subject: str
    detail: str

    def __str__(self) -> str:
        return f"{self.rule} at {self.subject}: {self.detail}"


@dataclass(frozen=True)
class Bank:
    id: str
    cash: Money


@dataclass(frozen=True)
class Liability:
    debtor: str
    creditor: str
    amount: Money
    senior: bool = False


@dataclass(frozen=True)
class FinancialNetwork:
    banks: tuple[Bank, ...]
    liabilities: tuple[Liability, ...]
    beta: Fraction
    central_bank: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "_engine_cache", None)
        object.__setattr__(self, "_eval_cache", {})

    def bank_ids(self) -> list[str]:
        return [b.id for b in self.banks]

    def bank(self, bank_id: str) -> Bank:
        for b in self.banks:
            if b.id == bank_id:
                return b
        raise UnknownBankError(f"unknown bank {bank_id!r}")

    def with_cash_added(self, additions: dict[str, Money]) -> "FinancialNetwork":
        banks = tuple(
            Bank(b.id, b.cash + additions.get(b.id, ZERO)) for b in self.banks
        )
        return FinancialNetwork(banks, self.liabilities, self.beta, self.central_bank)


def network(
    banks: Iterable[tuple[str, Money | int]],
    liabilities: Iterable[tuple[str, str, Money | int]] = (),
    beta: Fraction | int = 1,
    central_bank: Optional[str] = None,
    senior: Iterable[tuple[str, Money | int]] = (),
) -> FinancialNetwork:
    """Convenience constructor. ``senior`` lists (debtor, amount) claims
    owed to the central bank."""
    bs = tuple(Bank(i, Fraction(c)) for i, c in banks)
    ls = [Liability(u, v, Fraction(a)) for u, v, a in liabilities]
    for u, a in senior:
        if central_bank is None:
            raise ValueError("senior liabilities require a central bank")
        ls.append(Liability(u, central_bank, Fraction(a), senior=True))
    return FinancialNetwork(bs, tuple(ls), Fraction(beta), central_bank)


def validate(net: FinancialNetwork) -> list[Violation]:
    """Check all structural invariants; violations are data, not failures."""
    out: list[Violation] = []
    seen: set[str] = set()
    for b in net.banks:
        if b.id in seen:
            out.append(Violation("duplicate-id", b.id, "bank id is not unique"))
        seen.add(b.id)
        if b.cash < 0:
            out.append(Violation("negative-cash", b.id, f"cash {b.cash} < 0"))
    if not (0 <= net.beta <= 1):
        out.append(Violation("beta-range", "beta", f"beta {net.beta} not in [0,1]"))
    if net.central_bank is not None and net.central_bank not in seen:
        out.append(
            Violation("unknown-bank", net.central_bank, "central bank not in network")
        )
    edges: set[tuple[str, str]] = set()
    for liab in net.liabilities:
        edge = f"{liab.debtor}->{liab.creditor}"
        if liab.debtor not in seen:
            out.append(Violation("unknown-bank", edge, f"debtor {liab.debtor!r} missing"))
        if liab.creditor not in seen:
            out.append(
                Violation("unknown-bank", edge, f"creditor {liab.creditor!r} missing")
            )
        if liab.debtor == liab.creditor:
            out.append(Violation("self-liability", liab.debtor, "bank owes itself"))
        if liab.amount <= 0:
            out.append(Violation("nonpositive-liability", edge, f"amount {liab.amount}"))
        if liab.senior:
            if net.central_bank is None:
                out.append(
                    Violation("senior-without-central-bank", edge, "no central bank set")
                )
            elif liab.creditor != net.central_bank:
                out.append(
                    Violation(
                        "senior-creditor",
                        edge,
                        "senior liabilities must be owed to the central bank",
                    )
                )
        key = (liab.debtor, liab.creditor, liab.senior)
        if key in edges:
            out.append(Violation("duplicate-liability", edge, "entry repeated"))
        edges.add(key)
    return out


# ---------------------------------------------------------------------------
# Engine internals: integer-indexed arrays, one per network, built lazily.
# ---------------------------------------------------------------------------


@dataclass
class _Engine:
    ids: list[str]
    index: dict[str, int]
    cash: list[Fraction]
    beta: Fraction
    cb: Optional[int]
    jun_out: list[list[tuple[int, Fraction]]]
    sen_out: list[Fraction]
    l_jun: list[Fraction]
    l_tot: list[Fraction]
    topo: Optional[list[int]]  # None when the liability graph has a cycle
    full_assets: list[Fraction] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.ids)


def _build_engine(net: FinancialNetwork) -> _Engine:
    ids = [b.id for b in net.banks]
    index = {b: i for i, b in enumerate(ids)}
    n = len(ids)
    cash = [Fraction(b.cash) for b in net.banks]
    cb = index[net.central_bank] if net.central_bank is not None else None
    jun_out: list[list[tuple[int, Fraction]]] = [[] for _ in range(n)]
    sen_out = [ZERO] * n
    for liab in net.liabilities:
        u, v = index[liab.debtor], index[liab.creditor]
        if liab.senior:
            sen_out[u] += liab.amount
        else:
            jun_out[u].append((v, liab.amount))
    l_jun = [sum((a for _, a in jun_out[u]), ZERO) for u in range(n)]
    l_tot = [l_jun[u] + sen_out[u] for u in range(n)]

    # Kahn topological sort over all payment edges (junior and senior).
    indeg = [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    for u in range(n):
        for v, _ in jun_out[u]:
            succ[u].append(v)
            indeg[v] += 1
        if sen_out[u] > 0 and cb is not None:
            succ[u].append(cb)
            indeg[cb] += 1
    queue = [u for u in range(n) if indeg[u] == 0]
    topo: Optional[list[int]] = []
    while queue:
        u = queue.pop()
        topo.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if len(topo) != n:
        topo = None

    eng = _Engine(ids, index, cash, Fraction(net.beta), cb, jun_out, sen_out,
                  l_jun, l_tot, topo)
    eng.full_assets = _full_payment_assets(eng)
    return eng


def _full_payment_assets(eng: _Engine) -> list[Fraction]:
    a = list(eng.cash)
    for u in range(eng.n):
        for v, amt in eng.jun_out[u]:
            a[v] += amt
        if eng.cb is not None and eng.sen_out[u] > 0:
            a[eng.cb] += eng.sen_out[u]
    return a


def _engine(net: FinancialNetwork) -> _Engine:
    eng = getattr(net, "_engine_cache", None)
    if eng is None:
        eng = _build_engine(net)
        object.__setattr__(net, "_engine_cache", eng)
    return eng


@dataclass
class _RawClearing:
    assets: list[Fraction]
    recovery: list[Fraction]  # junior recovery rate (1 for solvent / no junior debt)
    senior_paid: list[Fraction]
    pays_full: list[bool]  # solvent or forced
    defaults: list[int]  # banks with assets < total liabilities


def _clear_dag(eng: _Engine, forced: frozenset[int]) -> _RawClearing:
    beta = eng.beta
    a = list(eng.cash)
    r = [ONE] * eng.n
    p0 = [ZERO] * eng.n
    full = [True] * eng.n
    defaults: list[int] = []
    for u in eng.topo:  # type: ignore[union-attr]
        au = a[u]
        if eng.l_tot[u] > 0 and au < eng.l_tot[u]:
            defaults.append(u)
            if u not in forced:
                full[u] = False
        if full[u]:
            p0[u] = eng.sen_out[u]
            if p0[u] > 0:
                a[eng.cb] += p0[u]  # type: ignore[index]
            for v, amt in eng.jun_out[u]:
                a[v] += amt
        else:
            pool = beta * au
            s = eng.sen_out[u]
            if s > 0:
                p0[u] = s if pool >= s else pool
                a[eng.cb] += p0[u]  # type: ignore[index]
                pool -= p0[u]
            if eng.l_jun[u] > 0:
                r[u] = pool / eng.l_jun[u]
                if r[u] != 0:
                    for v, amt in eng.jun_out[u]:
                        a[v] += r[u] * amt
    return _RawClearing(a, r, p0, full, defaults)


def _solve_linear(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination with partial pivoting over exact rationals."""
    n = len(rhs)
    m = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((row for row in range(col, n) if m[row][col] != 0), None)
        if pivot is None:
            raise ArithmeticError("singular clearing system")
        m[col], m[pivot] = m[pivot], m[col]
        inv = ONE / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for row in range(n):
            if row != col and m[row][col] != 0:
                f = m[row][col]
                m[row] = [x - f * y for x, y in zip(m[row], m[col])]
    return [m[i][n] for i in range(n)]


def _enumerate_covered(eng, senior_banks, solve_for, consistent):
    """Last-resort resolution of the senior coverage policy: try every
    covered set and keep the consistent solution with greatest assets."""
    import itertools as _it

    best = None
    for r in range(len(senior_banks), -1, -1):
        for combo in _it.combinations(senior_banks, r):
            covered = set(combo)
            try:
                a_def = solve_for(covered)
            except ArithmeticError:
                continue
            if not consistent(covered, a_def):
                continue
            total = sum(a_def.values(), ZERO)
            if best is None or total > best[0]:
                best = (total, covered, a_def)
    if best is None:
        raise BailnetError("no consistent senior coverage policy found")
    return best[1], best[2]


def _assets_for_default_set(
    eng: _Engine, defaulted: set[int]
) -> tuple[list[Fraction], set[int]]:
    """Assets of every bank when exactly ``defaulted`` pay beta-limited.

    Returns (assets, covered) where covered is the subset of defaulted
    banks whose beta-share fully covers their senior claim.  The senior
    min{beta a, l} split makes the system piecewise linear: the covered
    set acts as a policy choosing one linear piece per senior debtor.
    Policy iteration (recompute the covered set from each solution)
    almost always converges; on a cycle, fall back to enumerating the
    candidate covered sets and keeping the consistent solution.
    """
    beta = eng.beta
    order = sorted(defaulted)
    pos = {u: i for i, u in enumerate(order)}
    senior_banks = [u for u in order if eng.sen_out[u] > 0]

    def solve_for(covered: set[int]) -> dict[int, Fraction]:
        k = len(order)
        mat = [[ZERO] * k for _ in range(k)]
        rhs = [ZERO] * k
        for i, u in enumerate(order):
            mat[i][i] = ONE
            rhs[i] = eng.cash[u]
        # contributions of payments into defaulted banks
        for v in range(eng.n):
            if v in defaulted:
                sen = eng.sen_out[v]
                if sen > 0:
                    if v in covered:
                        pay_const, pay_coef = sen, ZERO
                    else:
                        pay_const, pay_coef = ZERO, beta
                    if eng.cb is not None and eng.cb in pos:
                        i = pos[eng.cb]
                        rhs[i] += pay_const
                        mat[i][pos[v]] -= pay_coef
                if eng.l_jun[v] > 0:
                    # junior pool: beta a_v - senior paid (0 when uncovered)
                    if v in covered:
                        const_pool, coef_pool = -eng.sen_out[v], beta
                    elif eng.sen_out[v] > 0:
                        const_pool, coef_pool = ZERO, ZERO
                    else:
                        const_pool, coef_pool = ZERO, beta
                    for w, amt in eng.jun_out[v]:
                        share = amt / eng.l_jun[v]
                        if w in pos:
                            i = pos[w]
                            rhs[i] += const_pool * share
                            mat[i][pos[v]] -= coef_pool * share
            else:
                for w, amt in eng.jun_out[v]:
                    if w in pos:
                        rhs[pos[w]] += amt
                if eng.cb is not None and eng.cb in pos and eng.sen_out[v] > 0:
                    rhs[pos[eng.cb]] += eng.sen_out[v]
        sol = _solve_linear(mat, rhs) if order else []
        return {u: sol[i] for i, u in enumerate(order)}

    def consistent(covered: set[int], a_def: dict[int, Fraction]) -> bool:
        for u in senior_banks:
            share = beta * a_def[u]
            if u in covered:
                if share < eng.sen_out[u]:
                    return False
            elif share > eng.sen_out[u]:
                return False
        return True

    covered = set(senior_banks)
    seen = {frozenset(covered)}
    try:
        a_def = solve_for(covered)
        while not consistent(covered, a_def):
            covered = {
                u for u in senior_banks if beta * a_def[u] >= eng.sen_out[u]
            }
            if frozenset(covered) in seen:
                raise ArithmeticError("covered-set policy iteration cycled")
            seen.add(frozenset(covered))
            a_def = solve_for(covered)
    except ArithmeticError:
        # singular piece or cycling policies: enumerate covered sets
        covered, a_def = _enumerate_covered(eng, senior_banks, solve_for, consistent)
    # assets of non-defaulted banks
    assets = list(eng.cash)
    for u, val in a_def.items():
        assets[u] = val
    pay_rate: dict[int, Fraction] = {}
    for v in range(eng.n):
        if v in defaulted:
            pool = beta * a_def[v]
            if eng.sen_out[v] > 0:
                pool -= eng.sen_out[v] if v in covered else beta * a_def[v]
            rate = pool / eng.l_jun[v] if eng.l_jun[v] > 0 else ZERO
        else:
            rate = ONE
        pay_rate[v] = rate
    for u in range(eng.n):
        if u in defaulted:
            continue
        assets[u] = eng.cash[u]
    for v in range(eng.n):
        for w, amt in eng.jun_out[v]:
            if w not in defaulted:
                assets[w] += pay_rate[v] * amt
        if eng.cb is not None and eng.cb not in defaulted and eng.sen_out[v] > 0:
            if v in defaulted:
                assets[eng.cb] += (
                    eng.sen_out[v] if v in covered else beta * a_def[v]
                )
            else:
                assets[eng.cb] += eng.sen_out[v]
    return assets, covered


def _raw_from_assets(
    eng: _Engine, assets: list[Fraction], defaulted: set[int], covered: set[int],
    forced: frozenset[int],
) -> _RawClearing:
    beta = eng.beta
    r = [ONE] * eng.n
    p0 = [ZERO] * eng.n
    full = [True] * eng.n
    defaults: list[int] = []
    for u in range(eng.n):
        if eng.l_tot[u] > 0 and assets[u] < eng.l_tot[u]:
            defaults.append(u)
        if u in defaulted:
            full[u] = False
            pool = beta * assets[u]
            if eng.sen_out[u] > 0:
                p0[u] = eng.sen_out[u] if u in covered else pool
                pool -= p0[u]
            r[u] = pool / eng.l_jun[u] if eng.l_jun[u] > 0 else ONE
        else:
            p0[u] = eng.sen_out[u]
    return _RawClearing(assets, r, p0, full, defaults)


def _clear_general(eng: _Engine, forced: frozenset[int]) -> _RawClearing:
    """Fictitious-default iteration: grow the default set until stable."""
    defaulted: set[int] = set()
    while True:
        assets, covered = _assets_for_default_set(eng, defaulted)
        new = {
            u
            for u in range(eng.n)
            if u not in forced and eng.l_tot[u] > 0 and assets[u] < eng.l_tot[u]
        }
        if new <= defaulted:
            return _raw_from_assets(eng, assets, defaulted, covered, forced)
        defaulted |= new


def _clear_raw(net: FinancialNetwork, forced: frozenset[int] = frozenset()) -> _RawClearing:
    eng = _engine(net)
    if eng.topo is not None:
        return _clear_dag(eng, forced)
    return _clear_general(eng, forced)


# ---------------------------------------------------------------------------
# Public clearing surface
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClearingResult:
    recovery: dict[str, Fraction]
    payments: dict[tuple[str, str], Money]
    assets: dict[str, Money]
    post_default_assets: dict[str, Money]
    defaults: frozenset[str]
    market_value: dict[str, Money]
    shortfall: dict[str, Money]
    senior_loss: dict[str, Money]


def _result_from_raw(net: FinancialNetwork, raw: _RawClearing) -> ClearingResult:
    eng = _engine(net)
    recovery: dict[str, Fraction] = {}
    payments: dict[tuple[str, str], Money] = {}
    assets: dict[str, Money] = {}
    apost: dict[str, Money] = {}
    mv: dict[str, Money] = {}
    sf: dict[str, Money] = {}
    sl: dict[str, Money] = {}
    default_ids = frozenset(eng.ids[u] for u in raw.defaults)
    for u in range(eng.n):
        uid = eng.ids[u]
        a = raw.assets[u]
        assets[uid] = a
        recovery[uid] = raw.recovery[u]
        if raw.pays_full[u]:
            apost[uid] = a - eng.sen_out[u]
        else:
            apost[uid] = eng.beta * a - raw.senior_paid[u]
        for v, amt in eng.jun_out[u]:
            rate = ONE if raw.pays_full[u] else raw.recovery[u]
            payments[(uid, eng.ids[v])] = rate * amt
        if eng.sen_out[u] > 0:
            # a junior claim to the central bank may share the key
            key = (uid, eng.ids[eng.cb])  # type: ignore[index]
            payments[key] = payments.get(key, ZERO) + (
                eng.sen_out[u] if raw.pays_full[u] else raw.senior_paid[u]
            )
        mv[uid] = max(a - eng.l_tot[u], ZERO)
        sf[uid] = max(eng.l_tot[u] - a, ZERO)
        if eng.sen_out[u] > 0 and uid in default_ids:
            sl[uid] = eng.sen_out[u] - (
                eng.sen_out[u] if raw.pays_full[u] else raw.senior_paid[u]
            )
        else:
            sl[uid] = ZERO
    return ClearingResult(
        recovery, payments, assets, apost, default_ids, mv, sf, sl
    )


def clear(net: FinancialNetwork) -> ClearingResult:
    """Greatest clearing recovery-rate vector with derived quantities."""
    violations = validate(net)
    if violations:
        raise InvalidNetworkError(violations)
    return _result_from_raw(net, _clear_raw(net))


def least_clearing(net: FinancialNetwork) -> ClearingResult:
    """Least clearing vector, for dominance property checks.

    Computed from the bottom of the default-set lattice: start with every
    indebted bank presumed in default and recompute the default set from
    each regime solution until it is self-consistent.  The intermediate
    regimes are not monotone (a presumed defaulter whose beta-share
    exceeds its debt overpays), so the iteration tracks visited sets and
    falls back to enumerating default sets on a cycle.  For beta = 1 the
    all-default system can be singular; there the clearing vector is
    unique when every bank holds positive cash, so the greatest vector is
    returned.
    """
    violations = validate(net)
    if violations:
        raise InvalidNetworkError(violations)
    eng = _engine(net)
    if eng.beta == 1:
        if all(c > 0 for c in eng.cash):
            return clear(net)
        raise CapacityError(
            "least clearing with beta=1 requires strictly positive cash"
        )
    indebted = frozenset(u for u in range(eng.n) if eng.l_tot[u] > 0)

    def consistent_default_set(defaulted: set[int]):
        assets, covered = _assets_for_default_set(eng, defaulted)
        new = {u for u in indebted if assets[u] < eng.l_tot[u]}
        return assets, covered, new

    defaulted = set(indebted)
    seen: set[frozenset[int]] = set()
    while True:
        key = frozenset(defaulted)
        if key in seen:
            assets, covered, defaulted = _least_by_enumeration(eng, indebted)
            break
        seen.add(key)
        assets, covered, new = consistent_default_set(defaulted)
        if new == defaulted:
            break
        defaulted = new
    raw = _raw_from_assets(eng, assets, set(defaulted), covered, frozenset())
    return _result_from_raw(net, raw)


def _least_by_enumeration(eng: _Engine, indebted: frozenset[int]):
    """Enumerate default sets, keep the self-consistent regimes, and
    return the one with the smallest assets (the lattice bottom)."""
    if len(indebted) > 16:
        raise CapacityError(
            f"least clearing fallback over {len(indebted)} indebted banks refused"
        )
    members = sorted(indebted)
    best = None
    for bits in range(1 << len(members)):
        defaulted = {u for i, u in enumerate(members) if bits >> i & 1}
        try:
            assets, covered = _assets_for_default_set(eng, defaulted)
        except (ArithmeticError, BailnetError):
            continue
        if {u for u in indebted if assets[u] < eng.l_tot[u]} != defaulted:
            continue
        total = sum(assets, ZERO)
        if best is None or total < best[0]:
            best = (total, assets, covered, defaulted)
    if best is None:
        raise BailnetError("no consistent default set found for least clearing")
    return best[1], best[2], best[3]


def update_function(net: FinancialNetwork, r: dict[str, Fraction]) -> dict[str, Fraction]:
    """One application of the clearing update map to a recovery vector.

    Used by tests to assert the fixed-point property of clear() exactly.
    Junior payments are r_u * l; senior payments follow the senior-debt
    equations given the assets implied by r.
    """
    eng = _engine(net)
    rv = [r[eng.ids[u]] for u in range(eng.n)]
    # assets implied by the given recovery rates; senior payments resolved
    # from the same assets, so iterate the senior split to consistency
    p0 = [eng.sen_out[u] for u in range(eng.n)]
    for _ in range(eng.n + 1):
        a = list(eng.cash)
        for u in range(eng.n):
            for v, amt in eng.jun_out[u]:
                a[v] += rv[u] * amt
            if eng.cb is not None and eng.sen_out[u] > 0:
                a[eng.cb] += p0[u]
        new_p0 = []
        for u in range(eng.n):
            if eng.sen_out[u] == 0:
                new_p0.append(ZERO)
            elif a[u] >= eng.l_tot[u]:
                new_p0.append(eng.sen_out[u])
            else:
                new_p0.append(min(eng.beta * a[u], eng.sen_out[u]))
        if new_p0 == p0:
            break
        p0 = new_p0
    out: dict[str, Fraction] = {}
    for u in range(eng.n):
        if eng.l_tot[u] == 0 or a[u] >= eng.l_tot[u]:
            apost = a[u] - eng.sen_out[u]
            out[eng.ids[u]] = ONE
            continue
        apost = eng.beta * a[u] - p0[u]
        if eng.l_jun[u] == 0:
            out[eng.ids[u]] = ONE
        else:
            out[eng.ids[u]] = min(apost / eng.l_jun[u], ONE)
    return out


def market_value(clearing: ClearingResult, bank: str) -> Money:
    if bank not in clearing.market_value:
        raise UnknownBankError(f"unknown bank {bank!r}")
    return clearing.market_value[bank]


def shortfall(clearing: ClearingResult, bank: str) -> Money:
    if bank not in clearing.shortfall:
        raise UnknownBankError(f"unknown bank {bank!r}")
    return clearing.shortfall[bank]
