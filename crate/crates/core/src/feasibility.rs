//! Verifiers deciding whether an arc set is a feasible FTP or FTF solution.
//!
//! The `*_cut` checks are single max-flow computations; the `*_enum` checks
//! replay every fault scenario literally and serve as their oracles.

use alloc::vec::Vec;

use crate::error::{Budget, SolveError};
use crate::flow::{max_flow, Capacity, CapacityProfile, FlowValue};
use crate::graph::Adjacency;
use crate::instance::{ArcId, ArcSet, Instance, Mode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub feasible: bool,
    /// A fault scenario defeating the set; `Some` iff infeasible.
    pub witness: Option<ArcSet>,
}

impl Verdict {
    fn feasible() -> Self {
        Verdict { feasible: true, witness: None }
    }

    fn infeasible(witness: ArcSet) -> Self {
        Verdict { feasible: false, witness: Some(witness) }
    }
}

fn ftp_k(inst: &Instance) -> usize {
    match inst.mode() {
        Mode::Ftp { k } => k,
        Mode::Ftf { .. } => panic!("FTP verifier called on an FTF instance"),
    }
}

fn ftf_ell(inst: &Instance) -> usize {
    match inst.mode() {
        Mode::Ftf { ell } => ell,
        Mode::Ftp { .. } => panic!("FTF verifier called on an FTP instance"),
    }
}

/// Cut check for FTP. Panics on an FTF instance.
pub fn ftp_feasible_cut(inst: &Instance, set: &ArcSet) -> Verdict {
    ftp_feasible_cut_k(inst, set, ftp_k(inst))
}

/// FTP cut check for an explicit `k`: vulnerable arcs get capacity 1, safe
/// arcs are unbounded, and the set is feasible iff the min cut is `> k`.
pub fn ftp_feasible_cut_k(inst: &Instance, set: &ArcSet, k: usize) -> Verdict {
    let caps = CapacityProfile::split_on(inst, set, Capacity::Finite(1), Capacity::Unbounded);
    let mf = max_flow(inst, &caps, inst.source(), inst.sink()).expect("terminals differ");
    if mf.value.at_least(k as u64 + 1) {
        return Verdict::feasible();
    }
    let witness = ArcSet::from_ids(inst, mf.min_cut.ids().iter().copied().filter(|&id| inst.is_vulnerable(id)));
    debug_assert!(witness.len() <= k);
    Verdict::infeasible(witness)
}

/// Scenario enumeration for FTP. Panics on an FTF instance.
pub fn ftp_feasible_enum(inst: &Instance, set: &ArcSet, budget: &Budget) -> Result<Verdict, SolveError> {
    ftp_feasible_enum_k(inst, set, ftp_k(inst), budget)
}

/// Tries every `F ⊆ M ∩ S` with `|F| ≤ k`, smallest first, and reports the
/// first scenario that disconnects `s` from `t`.
pub fn ftp_feasible_enum_k(inst: &Instance, set: &ArcSet, k: usize, budget: &Budget) -> Result<Verdict, SolveError> {
    let vulnerable: Vec<ArcId> = set.ids().iter().copied().filter(|&id| inst.is_vulnerable(id)).collect();
    let m = vulnerable.len();
    let size = k.min(m);
    let mut total: usize = 0;
    for i in 0..=size {
        total = total.saturating_add(binomial(m, i));
    }
    if total > budget.scenarios {
        return Err(SolveError::BudgetExceeded { what: "scenario", limit: budget.scenarios });
    }
    let adj = Adjacency::new(inst);
    let mask = inst.mask(set);
    let mut failed = alloc::vec![false; inst.arcs().len()];
    for i in 0..=size {
        let mut pick: Vec<usize> = (0..i).collect();
        loop {
            for &p in &pick {
                failed[vulnerable[p]] = true;
            }
            let alive = adj.reachable(inst.source(), |id| mask[id] && !failed[id])[inst.sink()];
            for &p in &pick {
                failed[vulnerable[p]] = false;
            }
            if !alive {
                return Ok(Verdict::infeasible(ArcSet::from_ids(inst, pick.iter().map(|&p| vulnerable[p]))));
            }
            if !next_combination(&mut pick, m) {
                break;
            }
        }
    }
    Ok(Verdict::feasible())
}

fn binomial(n: usize, r: usize) -> usize {
    let mut acc: usize = 1;
    for i in 0..r {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Advances `pick` to the next `r`-combination of `0..n` in lexicographic
/// order; false once exhausted.
pub(crate) fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let r = pick.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if pick[i] < n - r + i {
            pick[i] += 1;
            for j in i + 1..r {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Cut check for FTF. Panics on an FTP instance.
pub fn ftf_feasible_cut(inst: &Instance, set: &ArcSet) -> Verdict {
    ftf_feasible_cut_ell(inst, set, ftf_ell(inst))
}

/// With capacities `ell` on vulnerable and `ell + 1` on safe arcs, the set
/// is feasible iff the min cut is at least `ell * (ell + 1)`.
pub fn ftf_feasible_cut_ell(inst: &Instance, set: &ArcSet, ell: usize) -> Verdict {
    let l = ell as u64;
    let caps = CapacityProfile::split_on(inst, set, Capacity::Finite(l), Capacity::Finite(l + 1));
    let mf = max_flow(inst, &caps, inst.source(), inst.sink()).expect("terminals differ");
    if mf.value.at_least(l * (l + 1)) {
        return Verdict::feasible();
    }
    let cut = mf.min_cut;
    if cut.len() < ell {
        return Verdict::infeasible(ArcSet::empty());
    }
    // a violating cut with at least ell arcs has exactly ell arcs, one of
    // them vulnerable
    let f = cut.ids().iter().copied().find(|&id| inst.is_vulnerable(id)).expect("violating cut has a vulnerable arc");
    Verdict::infeasible(ArcSet::from_ids(inst, [f]))
}

/// Scenario enumeration for FTF. Panics on an FTP instance.
pub fn ftf_feasible_enum(inst: &Instance, set: &ArcSet) -> Verdict {
    ftf_feasible_enum_ell(inst, set, ftf_ell(inst))
}

/// Checks the empty scenario and every single vulnerable arc of the set,
/// in id order, with unit-capacity max-flow.
pub fn ftf_feasible_enum_ell(inst: &Instance, set: &ArcSet, ell: usize) -> Verdict {
    if !ftf_survives(inst, set, &ArcSet::empty(), ell) {
        return Verdict::infeasible(ArcSet::empty());
    }
    for &f in set.ids() {
        if inst.is_vulnerable(f) {
            let scenario = ArcSet::from_ids(inst, [f]);
            if !ftf_survives(inst, set, &scenario, ell) {
                return Verdict::infeasible(scenario);
            }
        }
    }
    Verdict::feasible()
}

/// Whether `set ∖ scenario` still has an `s`-`t` path.
pub fn ftp_survives(inst: &Instance, set: &ArcSet, scenario: &ArcSet) -> bool {
    let mask = inst.mask(set);
    Adjacency::new(inst).reachable(inst.source(), |id| mask[id] && !scenario.contains(id))[inst.sink()]
}

/// Whether `set ∖ scenario` still has `ell` arc-disjoint `s`-`t` paths.
pub fn ftf_survives(inst: &Instance, set: &ArcSet, scenario: &ArcSet, ell: usize) -> bool {
    let mask = inst.mask(set);
    let caps = CapacityProfile::from_fn(inst, |id, _| Capacity::Finite((mask[id] && !scenario.contains(id)) as u64));
    let mf = max_flow(inst, &caps, inst.source(), inst.sink()).expect("terminals differ");
    matches!(mf.value, FlowValue::Finite(v) if v >= ell as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::InstanceBuilder;

    fn parallel(p: usize, k: usize) -> Instance {
        let mut b = InstanceBuilder::new(Mode::Ftp { k });
        for _ in 0..p {
            b = b.arc("s", "t", 1, true);
        }
        b.build().unwrap()
    }

    #[test]
    fn two_of_three_parallel_arcs() {
        let inst = parallel(3, 1);
        let s = ArcSet::from_ids(&inst, [0, 1]);
        let b = Budget::default();
        assert!(ftp_feasible_cut(&inst, &s).feasible);
        assert!(ftp_feasible_enum(&inst, &s, &b).unwrap().feasible);

        let inst2 = inst.with_mode(Mode::Ftp { k: 2 }).unwrap();
        let cut = ftp_feasible_cut(&inst2, &s);
        let en = ftp_feasible_enum(&inst2, &s, &b).unwrap();
        assert_eq!(cut.witness, Some(s.clone()));
        assert_eq!(en.witness, Some(s));
    }

    #[test]
    fn safe_arc_is_always_feasible() {
        let inst = InstanceBuilder::new(Mode::Ftp { k: 5 }).arc("s", "t", 1, false).build().unwrap();
        let s = inst.all_arcs();
        assert!(ftp_feasible_cut(&inst, &s).feasible);
        assert!(ftp_feasible_enum(&inst, &s, &Budget::default()).unwrap().feasible);
    }

    #[test]
    fn enumeration_budget_is_enforced() {
        let inst = parallel(10, 5);
        let b = Budget { scenarios: 10, ..Budget::default() };
        assert!(matches!(
            ftp_feasible_enum(&inst, &inst.all_arcs(), &b),
            Err(SolveError::BudgetExceeded { .. })
        ));
    }

    fn ftf_paths(ell: usize, paths: &[&[bool]]) -> Instance {
        use alloc::format;
        let mut b = InstanceBuilder::new(Mode::Ftf { ell });
        for (i, p) in paths.iter().enumerate() {
            let mut prev = alloc::string::String::from("s");
            for (j, &v) in p.iter().enumerate() {
                let next = if j + 1 == p.len() { "t".into() } else { format!("p{i}_{j}") };
                b = b.arc(&prev, &next, 1, v);
                prev = next;
            }
        }
        b.build().unwrap()
    }

    #[test]
    fn ftf_three_vulnerable_paths_for_ell_two() {
        let inst = ftf_paths(2, &[&[true, true], &[true], &[true, true]]);
        let s = inst.all_arcs();
        assert!(ftf_feasible_cut(&inst, &s).feasible);
        assert!(ftf_feasible_enum(&inst, &s).feasible);
    }

    #[test]
    fn ftf_safe_paths_suffice() {
        let inst = ftf_paths(2, &[&[false, false], &[false]]);
        let s = inst.all_arcs();
        assert!(ftf_feasible_cut(&inst, &s).feasible);
        assert!(ftf_feasible_enum(&inst, &s).feasible);
    }

    #[test]
    fn ftf_one_vulnerable_arc_is_the_witness() {
        let inst = ftf_paths(2, &[&[false, true], &[false]]);
        let s = inst.all_arcs();
        let w = Some(ArcSet::from_ids(&inst, [1]));
        assert_eq!(ftf_feasible_cut(&inst, &s).witness, w);
        assert_eq!(ftf_feasible_enum(&inst, &s).witness, w);
    }

    #[test]
    fn ftf_too_few_paths_gives_empty_witness() {
        let inst = ftf_paths(2, &[&[false]]);
        let s = inst.all_arcs();
        assert_eq!(ftf_feasible_cut(&inst, &s).witness, Some(ArcSet::empty()));
        assert_eq!(ftf_feasible_enum(&inst, &s).witness, Some(ArcSet::empty()));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut pick = alloc::vec![0, 1];
        let mut seen = alloc::vec![pick.clone()];
        while next_combination(&mut pick, 4) {
            seen.push(pick.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[5], alloc::vec![2, 3]);
    }
}
