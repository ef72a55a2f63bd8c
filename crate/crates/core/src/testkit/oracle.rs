//! Definition-level brute-force optima.
//!
//! Each oracle runs an include/exclude search over the priced candidate
//! arcs: a branch stops as soon as its included set is feasible (adding arcs
//! never lowers the cost), and is cut when even every undecided arc would
//! not help or when its cost already reaches the incumbent. Zero-weight
//! candidates are always included. Feasibility uses the enumeration
//! verifiers only.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Budget, SolveError};
use crate::feasibility::{ftf_feasible_enum_ell, ftp_feasible_enum_k};
use crate::ftf::PathSystem;
use crate::instance::{ArcId, ArcSet, Instance, Mode, Weight};

fn subset_search(
    inst: &Instance,
    base: &ArcSet,
    candidates: &[ArcId],
    budget: &Budget,
    feasible: impl FnMut(&ArcSet) -> Result<bool, SolveError>,
) -> Result<Option<ArcSet>, SolveError> {
    let (free, mut priced): (Vec<ArcId>, Vec<ArcId>) = candidates.iter().partition(|&&id| inst.weight(id).is_zero());
    if priced.len() > budget.oracle_arcs {
        return Err(SolveError::BudgetExceeded { what: "oracle arc", limit: budget.oracle_arcs });
    }
    // expensive arcs first so exclusion decisions prune early
    priced.sort_by(|&a, &b| inst.weight(b).cmp(&inst.weight(a)).then(a.cmp(&b)));
    let fixed: Vec<ArcId> = base.ids().iter().copied().chain(free).collect();

    struct Dfs<'a, F> {
        inst: &'a Instance,
        fixed: &'a [ArcId],
        priced: &'a [ArcId],
        taken: Vec<bool>,
        best: Option<(Weight, ArcSet)>,
        feasible: F,
    }
    impl<F: FnMut(&ArcSet) -> Result<bool, SolveError>> Dfs<'_, F> {
        fn set(&self, upto_all: Option<usize>) -> ArcSet {
            let chosen = self.priced.iter().enumerate().filter(|&(i, _)| match upto_all {
                Some(next) => self.taken[i] || i >= next,
                None => self.taken[i],
            });
            ArcSet::from_ids(self.inst, self.fixed.iter().copied().chain(chosen.map(|(_, &id)| id)))
        }

        fn run(&mut self, next: usize, spent: Weight) -> Result<(), SolveError> {
            if self.best.as_ref().is_some_and(|(b, _)| spent >= *b) {
                return Ok(());
            }
            let current = self.set(None);
            if (self.feasible)(&current)? {
                self.best = Some((spent, current));
                return Ok(());
            }
            if next == self.priced.len() {
                return Ok(());
            }
            let optimistic = self.set(Some(next));
            if !(self.feasible)(&optimistic)? {
                return Ok(());
            }
            self.taken[next] = true;
            self.run(next + 1, spent + self.inst.weight(self.priced[next]))?;
            self.taken[next] = false;
            self.run(next + 1, spent)
        }
    }
    let mut dfs = Dfs { inst, fixed: &fixed, priced: &priced, taken: alloc::vec![false; priced.len()], best: None, feasible };
    dfs.run(0, Weight::zero())?;
    Ok(dfs.best.map(|(_, s)| s))
}

fn mode_k(inst: &Instance) -> Result<usize, SolveError> {
    match inst.mode() {
        Mode::Ftp { k } => Ok(k),
        Mode::Ftf { .. } => Err(SolveError::ModeMismatch("expected an FTP instance".into())),
    }
}

fn mode_ell(inst: &Instance) -> Result<usize, SolveError> {
    match inst.mode() {
        Mode::Ftf { ell } => Ok(ell),
        Mode::Ftp { .. } => Err(SolveError::ModeMismatch("expected an FTF instance".into())),
    }
}

fn none_found() -> SolveError {
    SolveError::Infeasible { witness: ArcSet::empty() }
}

/// Cheapest FTP solution at the instance's own `k`. Works on directed and
/// undirected instances alike.
pub fn brute_force_ftp(inst: &Instance, budget: &Budget) -> Result<ArcSet, SolveError> {
    brute_force_ftp_k(inst, mode_k(inst)?, budget)
}

pub fn brute_force_ftp_k(inst: &Instance, k: usize, budget: &Budget) -> Result<ArcSet, SolveError> {
    let all: Vec<ArcId> = (0..inst.arcs().len()).collect();
    subset_search(inst, &ArcSet::empty(), &all, budget, |s| Ok(ftp_feasible_enum_k(inst, s, k, budget)?.feasible))?
        .ok_or_else(none_found)
}

pub fn brute_force_ftf(inst: &Instance, budget: &Budget) -> Result<ArcSet, SolveError> {
    let ell = mode_ell(inst)?;
    let all: Vec<ArcId> = (0..inst.arcs().len()).collect();
    subset_search(inst, &ArcSet::empty(), &all, budget, |s| Ok(ftf_feasible_enum_ell(inst, s, ell).feasible))?
        .ok_or_else(none_found)
}

/// Cheapest `Y ⊆ A ∖ X0` with `X0 ∪ Y` FTF-feasible.
pub fn brute_force_augmentation(inst: &Instance, x0: &ArcSet, budget: &Budget) -> Result<ArcSet, SolveError> {
    let ell = mode_ell(inst)?;
    let candidates: Vec<ArcId> = (0..inst.arcs().len()).filter(|&id| !x0.contains(id)).collect();
    let best = subset_search(inst, x0, &candidates, budget, |s| Ok(ftf_feasible_enum_ell(inst, s, ell).feasible))?
        .ok_or_else(none_found)?;
    Ok(best.difference(x0, inst))
}

/// Augmentation oracle for a path system (its base set is `X0`).
pub fn brute_force_augmentation_of(inst: &Instance, ps: &PathSystem, budget: &Budget) -> Result<ArcSet, SolveError> {
    brute_force_augmentation(inst, &ps.base, budget)
}
