//! Satisfiability of atom conjunctions over arbitrary Szmielew groups.
//!
//! The solver splits on whether the conjunction pins an exact subgroup
//! size. Without a DeltaEq atom the primes are independent: Phi atoms
//! constrain single kappa values, Theta and Gamma atoms constrain
//! lambda (resp. mu) plus kappa suffix sums, and every DeltaGt atom can
//! be satisfied afterwards by a single Q summand, which makes |p^n A|
//! infinite at every prime. With a DeltaEq atom the witness must be a
//! finite direct sum of cyclic prime-power groups, and each pinned size
//! splits into one exact weighted equation per prime.
//!
//! Witnesses are canonical: among all witnesses the solver can express,
//! it returns the least under the order that compares components at
//! ascending primes (each by lambda, then mu, then kappa values from the
//! highest relevant level down, omega greatest) and nu last. Witnesses
//! always have kappa_tail = 0.
//!
//! Search time is linear in the numeric bounds involved, which the
//! parser caps; sentences built directly against the API with enormous
//! bounds are decided exactly but may be slow.

use std::collections::{BTreeMap, BTreeSet};

use crate::arith::factorize;
use crate::atom::{Family, InvariantAtom, Relation};
use crate::card::{ExtCard, Finite, Omega};
use crate::descriptor::{PrimeComponent, SzmielewDescriptor};
use crate::eval::{eval_atom, eval_sentence};
use crate::normal::Conjunction;

/// Finite kappa values and suffix sums are kept representable as `u64`;
/// anything larger is reachable only through omega.
const CAP: u128 = u64::MAX as u128;

/// A witness Szmielew group for the conjunction, or `None` when no
/// Szmielew group at all satisfies it.
pub fn satisfiable_szmielew(c: &Conjunction) -> Option<SzmielewDescriptor> {
    let pinned_size = c.atoms().iter().any(|a| a.is(Family::Delta, Relation::Eq));
    let witness = if pinned_size { solve_with_delta_eq(c) } else { solve_without_delta_eq(c) }?;
    debug_assert!(
        eval_sentence(&c.to_sentence(), &witness),
        "witness fails its own conjunction: {c:?} -> {witness:?}"
    );
    Some(witness)
}

fn atoms_by_prime(c: &Conjunction) -> BTreeMap<u64, Vec<InvariantAtom>> {
    let mut map: BTreeMap<u64, Vec<InvariantAtom>> = BTreeMap::new();
    for &a in c.atoms() {
        map.entry(a.prime()).or_default().push(a);
    }
    map
}

fn descriptor(primes: BTreeMap<u64, PrimeComponent>, nu: ExtCard) -> SzmielewDescriptor {
    SzmielewDescriptor::new(primes, nu).expect("atom primes are validated at construction")
}

// ---------------------------------------------------------------------
// No DeltaEq: independent per-prime systems, nu in {0, 1}.

fn solve_without_delta_eq(c: &Conjunction) -> Option<SzmielewDescriptor> {
    let mut components = BTreeMap::new();
    for (p, atoms) in atoms_by_prime(c) {
        components.insert(p, solve_prime(&atoms)?);
    }
    let witness = descriptor(components.clone(), ExtCard::ZERO);
    let delta_gt_holds = c
        .atoms()
        .iter()
        .filter(|a| a.is(Family::Delta, Relation::Gt))
        .all(|&a| eval_atom(a, &witness));
    if delta_gt_holds {
        Some(witness)
    } else {
        // A Q summand makes every |p^n A| infinite without touching the
        // per-prime invariants; preferred over inflating components
        // because nu is compared last in the witness order.
        Some(descriptor(components, ExtCard::ONE))
    }
}

/// The Phi/Theta/Gamma atoms at one prime, keyed by level. An Eq atom
/// pins a value, so two pins with different bounds at one level are
/// already unsatisfiable; of several Gt atoms at one level only the
/// largest bound matters.
#[derive(Default)]
struct PrimeSystem {
    phi_eq: BTreeMap<u32, u64>,
    phi_gt: BTreeMap<u32, u64>,
    theta_eq: BTreeMap<u32, u64>,
    theta_gt: BTreeMap<u32, u64>,
    gamma_eq: BTreeMap<u32, u64>,
    gamma_gt: BTreeMap<u32, u64>,
}

impl PrimeSystem {
    fn collect(atoms: &[InvariantAtom]) -> Option<PrimeSystem> {
        let mut sys = PrimeSystem::default();
        for a in atoms {
            let (eq, gt) = match a.family() {
                Family::Phi => (&mut sys.phi_eq, &mut sys.phi_gt),
                Family::Theta => (&mut sys.theta_eq, &mut sys.theta_gt),
                Family::Gamma => (&mut sys.gamma_eq, &mut sys.gamma_gt),
                // DeltaGt is handled at assembly; DeltaEq in the other branch.
                Family::Delta => continue,
            };
            match a.relation() {
                Relation::Eq => {
                    if *eq.entry(a.level()).or_insert(a.bound()) != a.bound() {
                        return None;
                    }
                }
                Relation::Gt => {
                    let b = gt.entry(a.level()).or_insert(a.bound());
                    *b = (*b).max(a.bound());
                }
            }
        }
        Some(sys)
    }
}

/// Candidate lambda (or mu) values in increasing order. With an Eq atom
/// the value can be at most the smallest pinned bound and never omega.
/// With only Gt atoms, `top + 1` always works when anything does, since
/// the theta (gamma) value is then above every bound outright; omega
/// covers bounds at the very top of the `u64` range.
fn side_candidates(
    eq: &BTreeMap<u32, u64>,
    gt: &BTreeMap<u32, u64>,
) -> Box<dyn Iterator<Item = ExtCard>> {
    if let Some(&least) = eq.values().min() {
        Box::new((0..=least).map(Finite))
    } else if let Some(&top) = gt.values().max() {
        Box::new((0..=top.saturating_add(1)).map(Finite).chain([Omega]))
    } else {
        Box::new(std::iter::once(ExtCard::ZERO))
    }
}

fn solve_prime(atoms: &[InvariantAtom]) -> Option<PrimeComponent> {
    let sys = PrimeSystem::collect(atoms)?;
    let skel = build_skeleton(&sys)?;
    for lambda in side_candidates(&sys.theta_eq, &sys.theta_gt) {
        for mu in side_candidates(&sys.gamma_eq, &sys.gamma_gt) {
            let Some((pins, lows)) = pins_and_lows(&sys, lambda, mu) else { continue };
            if let Some(kappa) = solve_kappa(&skel, &pins, &lows) {
                return Some(PrimeComponent::new(kappa, ExtCard::ZERO, lambda, mu));
            }
        }
    }
    None
}

/// Translate Theta/Gamma atoms into constraints on the kappa suffix
/// sums S(n) = sum_{m >= n} kappa(m), for one choice of lambda and mu:
/// an Eq bound k pins S(n) = k - offset, a Gt bound k demands
/// S(n) >= k + 1 - offset. `None` when the choice is outright
/// infeasible (offset above a pinned bound, or two pins that disagree).
fn pins_and_lows(
    sys: &PrimeSystem,
    lambda: ExtCard,
    mu: ExtCard,
) -> Option<(BTreeMap<u32, u128>, BTreeMap<u32, u128>)> {
    let mut pins: BTreeMap<u32, u128> = BTreeMap::new();
    let mut lows: BTreeMap<u32, u128> = BTreeMap::new();
    let sides = [(&sys.theta_eq, &sys.theta_gt, lambda), (&sys.gamma_eq, &sys.gamma_gt, mu)];
    for (eq, gt, offset) in sides {
        match offset {
            Omega => {
                // The invariant is omega at every level: no finite pin
                // can hold, every Gt bound already does.
                if !eq.is_empty() {
                    return None;
                }
            }
            Finite(off) => {
                for (&n, &k) in eq {
                    let t = (k as u128).checked_sub(off as u128)?;
                    if *pins.entry(n).or_insert(t) != t {
                        return None;
                    }
                }
                for (&n, &k) in gt {
                    let need = (k as u128 + 1).saturating_sub(off as u128);
                    if need > 0 {
                        let e = lows.entry(n).or_insert(need);
                        *e = (*e).max(need);
                    }
                }
            }
        }
    }
    Some((pins, lows))
}

/// One kappa variable of the suffix-sum system. Only the atom levels
/// and one absorber level above each can ever need mass: mass elsewhere
/// can be shifted onto these without changing any pointwise or suffix
/// constraint.
struct LevelDomain {
    level: u32,
    /// Allowed finite values, as a closed interval.
    fin: Option<(u128, u128)>,
    omega: bool,
}

fn build_skeleton(sys: &PrimeSystem) -> Option<Vec<LevelDomain>> {
    let mut levels: BTreeSet<u32> = BTreeSet::new();
    let maps =
        [&sys.phi_eq, &sys.phi_gt, &sys.theta_eq, &sys.theta_gt, &sys.gamma_eq, &sys.gamma_gt];
    for m in maps {
        for &l in m.keys() {
            levels.insert(l);
            if let Some(up) = l.checked_add(1) {
                levels.insert(up);
            }
        }
    }
    let mut skel = Vec::with_capacity(levels.len());
    for &l in &levels {
        let d = match (sys.phi_eq.get(&l), sys.phi_gt.get(&l)) {
            (Some(&k), gt) => {
                if matches!(gt, Some(&b) if k <= b) {
                    return None;
                }
                LevelDomain { level: l, fin: Some((k as u128, k as u128)), omega: false }
            }
            (None, Some(&b)) => {
                let fin = (b < u64::MAX).then_some((b as u128 + 1, CAP));
                LevelDomain { level: l, fin, omega: true }
            }
            (None, None) => LevelDomain { level: l, fin: Some((0, CAP)), omega: true },
        };
        skel.push(d);
    }
    Some(skel)
}

/// A set of possible suffix sums: an interval of finite values plus
/// optionally omega. Sums of interval-or-omega level domains stay of
/// this shape, which is what lets feasibility be computed exactly in
/// one linear pass and the minimal assignment be extracted greedily.
#[derive(Clone, Copy, Debug)]
struct SumSet {
    fin: Option<(u128, u128)>,
    omega: bool,
}

impl SumSet {
    const ALL: SumSet = SumSet { fin: Some((0, CAP)), omega: true };

    fn is_empty(self) -> bool {
        self.fin.is_none() && !self.omega
    }

    fn contains_finite(self, v: u128) -> bool {
        matches!(self.fin, Some((lo, hi)) if lo <= v && v <= hi)
    }

    /// Intersect with the suffix constraint checked at one level.
    fn restrict(self, pin: Option<u128>, low: u128) -> SumSet {
        let mut fin = self.fin;
        if let Some(t) = pin {
            fin = fin.and_then(|(lo, hi)| (lo <= t && t <= hi).then_some((t, t)));
        }
        fin = fin.and_then(|(lo, hi)| {
            let lo = lo.max(low);
            (lo <= hi).then_some((lo, hi))
        });
        SumSet { fin, omega: self.omega && pin.is_none() }
    }
}

/// The incoming sums from which target `t` is reachable after adding
/// one value from domain `d`.
fn preimage(t: SumSet, d: &LevelDomain) -> SumSet {
    let mut fin = None;
    if let (Some((tl, th)), Some((dl, dh))) = (t.fin, d.fin) {
        if th >= dl {
            let lo = tl.saturating_sub(dh);
            let hi = th - dl;
            if lo <= hi {
                fin = Some((lo, hi));
            }
        }
    }
    if d.omega && t.omega {
        // Choosing omega here absorbs any finite incoming sum.
        fin = Some((0, CAP));
    }
    SumSet { fin, omega: t.omega }
}

/// Solve the per-level system: find kappa values within the domains
/// whose suffix sums meet every pin and lower bound, minimizing values
/// from the top level down (omega greatest). Valid incoming sums are
/// precomputed from the bottom constraint up; the greedy top-down
/// choice is then exact because each set is an interval plus optionally
/// omega.
fn solve_kappa(
    skel: &[LevelDomain],
    pins: &BTreeMap<u32, u128>,
    lows: &BTreeMap<u32, u128>,
) -> Option<BTreeMap<u32, ExtCard>> {
    let r = skel.len();
    // t_sets[j]: suffix sums allowed at level j, i.e. meeting the
    // constraint there and completable through the levels below it.
    let mut t_sets = vec![SumSet::ALL; r];
    let mut feas = SumSet::ALL;
    for (j, dom) in skel.iter().enumerate() {
        let pin = pins.get(&dom.level).copied();
        let low = lows.get(&dom.level).copied().unwrap_or(0);
        let t = feas.restrict(pin, low);
        t_sets[j] = t;
        feas = preimage(t, dom);
        if feas.is_empty() {
            return None;
        }
    }
    if !feas.contains_finite(0) {
        return None;
    }

    let mut out = BTreeMap::new();
    let mut sum: Option<u128> = Some(0); // None once omega
    for j in (0..r).rev() {
        let dom = &skel[j];
        let t = t_sets[j];
        let kappa = match sum {
            Some(s) => {
                let finite_pick = t.fin.zip(dom.fin).and_then(|((tl, th), (dl, dh))| {
                    if th < s {
                        return None;
                    }
                    let lo = dl.max(tl.saturating_sub(s));
                    let hi = dh.min(th - s);
                    (lo <= hi).then_some(lo)
                });
                match finite_pick {
                    Some(v) => Finite(v as u64),
                    None => {
                        debug_assert!(dom.omega && t.omega);
                        Omega
                    }
                }
            }
            None => {
                debug_assert!(t.omega);
                match dom.fin {
                    Some((dl, _)) => Finite(dl as u64),
                    None => Omega,
                }
            }
        };
        match kappa {
            Omega => sum = None,
            Finite(v) => {
                if let Some(s) = &mut sum {
                    *s += v as u128;
                }
            }
        }
        out.insert(dom.level, kappa);
    }
    Some(out)
}

// ---------------------------------------------------------------------
// With DeltaEq: finite witnesses from exact weighted exponent equations.

/// A DeltaEq atom at (p, n) with bound of factorization prod q^{e_q}
/// forces nu = 0, lambda = mu = 0 and kappa_tail = 0 everywhere, all
/// kappa finite, and for every prime q the equation
///
/// ```text
/// sum_{m >= start} (m + 1 - start) * kappa_{q,m} = e_q,
/// ```
///
/// with start = n at q = p and 0 elsewhere (a cyclic summand Z(q^{m+1})
/// contributes q^{m+1-start} to |q^start A| and its full order to sizes
/// at other primes). Candidate components per prime are the exact
/// solutions of these equations, extended over the free levels below
/// the lowest start; the cross product is scanned in witness order for
/// a combination satisfying the remaining (DeltaGt) atoms.
fn solve_with_delta_eq(c: &Conjunction) -> Option<SzmielewDescriptor> {
    let by_prime = atoms_by_prime(c);
    let factored: Vec<(InvariantAtom, BTreeMap<u64, u64>)> = c
        .atoms()
        .iter()
        .filter(|a| a.is(Family::Delta, Relation::Eq))
        .map(|&a| (a, factorize(a.bound())))
        .collect();

    let mut all_primes: BTreeSet<u64> = by_prime.keys().copied().collect();
    for (_, f) in &factored {
        all_primes.extend(f.keys().copied());
    }

    // Finite search values only ever need one past the largest strict
    // bound: beyond that, only omega changes any atom's truth value.
    // Equality pins may sit higher and must stay reachable.
    let max_bound = c.atoms().iter().map(|a| a.bound()).max().unwrap_or(0);
    let value_cap = max_bound.saturating_add(1).min(64);

    let mut lists: Vec<(u64, Vec<PrimeComponent>)> = Vec::new();
    for &q in &all_primes {
        let constraints = weighted_constraints(q, &factored)?;
        let weighted = weighted_assignments(&constraints);
        if weighted.is_empty() {
            return None;
        }
        let min_start = constraints.iter().map(|&(s, _)| s).min().unwrap();
        let local: Vec<InvariantAtom> = by_prime.get(&q).cloned().unwrap_or_default();
        let eq_pin_max = local
            .iter()
            .filter(|a| a.relation() == Relation::Eq && a.family() != Family::Delta)
            .map(|a| a.bound())
            .max()
            .unwrap_or(0);
        let frees = free_assignments(&local, min_start, value_cap.max(eq_pin_max));

        let mut candidates = Vec::new();
        for w in &weighted {
            for f in &frees {
                let mut kappa: BTreeMap<u32, ExtCard> = f.clone();
                kappa.extend(w.iter().map(|(&m, &v)| (m, Finite(v))));
                let comp = PrimeComponent::new(kappa, ExtCard::ZERO, ExtCard::ZERO, ExtCard::ZERO);
                let single = descriptor([(q, comp.clone())].into(), ExtCard::ZERO);
                let local_ok = local
                    .iter()
                    .filter(|a| a.family() != Family::Delta)
                    .all(|&a| eval_atom(a, &single));
                if local_ok {
                    candidates.push(comp);
                }
            }
        }
        if candidates.is_empty() {
            return None;
        }
        candidates.sort_by(kappa_revlex);
        lists.push((q, candidates));
    }

    // Size atoms see the whole group, so they are checked on assembled
    // descriptors. Scanning with the first prime most significant and
    // each list sorted makes the first passing combination minimal.
    let sentence = c.to_sentence();
    let sizes: Vec<usize> = lists.iter().map(|(_, v)| v.len()).collect();
    let mut idx = vec![0usize; lists.len()];
    loop {
        let components: BTreeMap<u64, PrimeComponent> =
            lists.iter().zip(&idx).map(|((q, cands), &i)| (*q, cands[i].clone())).collect();
        let d = descriptor(components, ExtCard::ZERO);
        if eval_sentence(&sentence, &d) {
            return Some(d);
        }
        if !bump(&mut idx, &sizes) {
            return None;
        }
    }
}

fn bump(idx: &mut [usize], sizes: &[usize]) -> bool {
    for j in (0..idx.len()).rev() {
        idx[j] += 1;
        if idx[j] < sizes[j] {
            return true;
        }
        idx[j] = 0;
    }
    false
}

/// The weighted equations at one prime, as (start, budget) pairs.
/// `None` when two equations share a start but disagree on the budget,
/// which no assignment can satisfy.
fn weighted_constraints(
    q: u64,
    factored: &[(InvariantAtom, BTreeMap<u64, u64>)],
) -> Option<Vec<(u32, u64)>> {
    let mut map: BTreeMap<u32, u64> = BTreeMap::new();
    for (a, f) in factored {
        let start = if a.prime() == q { a.level() } else { 0 };
        let budget = f.get(&q).copied().unwrap_or(0);
        if *map.entry(start).or_insert(budget) != budget {
            return None;
        }
    }
    Some(map.into_iter().collect())
}

/// All exact solutions of the weighted equations. Only finitely many
/// levels can carry mass: at level m the weight against the equation
/// starting at s <= m is m + 1 - s, so m is capped by every s + budget.
fn weighted_assignments(constraints: &[(u32, u64)]) -> Vec<BTreeMap<u32, u64>> {
    let min_start = constraints.iter().map(|&(s, _)| s).min().unwrap();
    let mut levels = Vec::new();
    let mut m = min_start;
    loop {
        if constraints.iter().all(|&(s, b)| s > m || (m - s) as u64 + 1 <= b) {
            levels.push(m);
        }
        if constraints.iter().all(|&(s, b)| m as u64 >= s as u64 + b) {
            break;
        }
        match m.checked_add(1) {
            Some(next) => m = next,
            None => break,
        }
    }
    let mut remaining: Vec<u64> = constraints.iter().map(|&(_, b)| b).collect();
    let mut out = Vec::new();
    let mut current = BTreeMap::new();
    fill_levels(&levels, constraints, &mut remaining, &mut current, &mut out, 0);
    out
}

fn fill_levels(
    levels: &[u32],
    constraints: &[(u32, u64)],
    remaining: &mut [u64],
    current: &mut BTreeMap<u32, u64>,
    out: &mut Vec<BTreeMap<u32, u64>>,
    at: usize,
) {
    if at == levels.len() {
        if remaining.iter().all(|&r| r == 0) {
            out.push(current.clone());
        }
        return;
    }
    let m = levels[at];
    let weights: Vec<Option<u64>> =
        constraints.iter().map(|&(s, _)| (s <= m).then(|| (m - s) as u64 + 1)).collect();
    let max_v = weights
        .iter()
        .zip(remaining.iter())
        .filter_map(|(&w, &r)| w.map(|w| r / w))
        .min()
        .expect("every candidate level has an applicable equation");
    for v in 0..=max_v {
        if v > 0 {
            for (&w, r) in weights.iter().zip(remaining.iter_mut()) {
                if let Some(w) = w {
                    *r -= w;
                }
            }
            current.insert(m, v);
        }
        fill_levels(levels, constraints, remaining, current, out, at + 1);
    }
    // Undo the accumulated subtractions for this level.
    for (&w, r) in weights.iter().zip(remaining.iter_mut()) {
        if let Some(w) = w {
            *r += w * max_v;
        }
    }
    current.remove(&m);
}

/// Enumerate kappa values over the free levels in [0, min_start): the
/// local atom levels there plus the top level of each gap between
/// consecutive constrained levels, including the gap right below the
/// weighted region. Moving mass up within a gap changes no pointwise or
/// suffix invariant and only raises size contributions, so mass can
/// always be consolidated at gap tops; omega is included since strict
/// bounds saturate there.
fn free_assignments(
    local: &[InvariantAtom],
    min_start: u32,
    value_cap: u64,
) -> Vec<BTreeMap<u32, ExtCard>> {
    if min_start == 0 {
        return vec![BTreeMap::new()];
    }
    let atom_levels: BTreeSet<u32> =
        local.iter().map(|a| a.level()).filter(|&l| l < min_start).collect();
    let mut support = atom_levels.clone();
    for &b in atom_levels.iter().chain([&min_start]) {
        if b > 0 {
            support.insert(b - 1);
        }
    }
    let values: Vec<ExtCard> = (0..=value_cap).map(Finite).chain([Omega]).collect();

    let mut out = vec![BTreeMap::new()];
    for &l in &support {
        let mut next = Vec::with_capacity(out.len() * values.len());
        for partial in &out {
            for &v in &values {
                let mut m = partial.clone();
                if !v.is_zero() {
                    m.insert(l, v);
                }
                next.push(m);
            }
        }
        out = next;
    }
    out
}

/// Witness order on same-prime components with zero lambda, mu and
/// tail: compare kappa from the top level down, omega greatest.
fn kappa_revlex(a: &PrimeComponent, b: &PrimeComponent) -> std::cmp::Ordering {
    let top = a.kappa_exceptions().keys().chain(b.kappa_exceptions().keys()).max().copied();
    let Some(top) = top else { return std::cmp::Ordering::Equal };
    for n in (0..=top).rev() {
        let ord = a.kappa(n).cmp(&b.kappa(n));
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}
