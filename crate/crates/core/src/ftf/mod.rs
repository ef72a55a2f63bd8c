//! FTF algorithms: the `(ell+1)`-approximation, exact augmentation of a
//! fixed path system, and the resulting 2-approximation.

mod augment;
mod paths;

pub use augment::{build_aux_graph, solve_augmentation, AuxGraph, AuxLink, AuxNode, LinkKind, LinkRule};
pub use paths::{residual_feasibility_check, PathSystem};

use crate::error::{Budget, SolveError};
use crate::feasibility::ftf_feasible_cut;
use crate::flow::{min_cost_flow, Capacity, CapacityProfile};
use crate::instance::{ArcSet, Instance, Mode};

pub(crate) fn expect_ftf(inst: &Instance) -> Result<usize, SolveError> {
    if !inst.directed() {
        return Err(SolveError::Undirected);
    }
    match inst.mode() {
        Mode::Ftf { ell } => Ok(ell),
        Mode::Ftp { .. } => Err(SolveError::ModeMismatch("expected an FTF instance".into())),
    }
}

fn infeasible(inst: &Instance) -> SolveError {
    SolveError::Infeasible { witness: ftf_feasible_cut(inst, &inst.all_arcs()).witness.unwrap_or_default() }
}

/// Support of a min-cost flow of value `ell * (ell + 1)` with capacity
/// `ell` on vulnerable and `ell + 1` on safe arcs.
pub fn approx_ftf_ellplus1(inst: &Instance) -> Result<ArcSet, SolveError> {
    let ell = expect_ftf(inst)? as u64;
    let caps = CapacityProfile::split(inst, Capacity::Finite(ell), Capacity::Finite(ell + 1));
    match min_cost_flow(inst, &caps, ell * (ell + 1)) {
        Ok(f) => Ok(f.support),
        Err(SolveError::FlowInfeasible { .. }) => Err(infeasible(inst)),
        Err(e) => Err(e),
    }
}

pub fn approx_ftf_2(inst: &Instance) -> Result<ArcSet, SolveError> {
    approx_ftf_2_with(inst, &Budget::default(), LinkRule::default())
}

/// Cheapest `ell` disjoint paths `X0`, then the optimal augmentation of
/// `X0`. Cost is at most twice the optimum.
pub fn approx_ftf_2_with(inst: &Instance, budget: &Budget, rule: LinkRule) -> Result<ArcSet, SolveError> {
    let ell = expect_ftf(inst)?;
    let x0 = match min_cost_flow(inst, &CapacityProfile::unit(inst), ell as u64) {
        Ok(f) => f.support,
        Err(SolveError::FlowInfeasible { .. }) => return Err(infeasible(inst)),
        Err(e) => return Err(e),
    };
    let ps = PathSystem::from_arcs(inst, &x0, ell)?;
    let y = match solve_augmentation(inst, &ps, budget, rule) {
        Ok(y) => y,
        Err(SolveError::Infeasible { .. }) => return Err(infeasible(inst)),
        Err(e) => return Err(e),
    };
    Ok(x0.union(&y, inst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::ftf_feasible_enum;
    use crate::instance::{InstanceBuilder, Weight};

    fn parallel(p: usize, ell: usize) -> Instance {
        let mut b = InstanceBuilder::new(Mode::Ftf { ell });
        for _ in 0..p {
            b = b.arc("s", "t", 1, true);
        }
        b.build().unwrap()
    }

    #[test]
    fn safe_graph_takes_cheapest_disjoint_paths() {
        let inst = InstanceBuilder::new(Mode::Ftf { ell: 2 })
            .arc("s", "t", 1, false)
            .arc("s", "t", 2, false)
            .arc("s", "t", 5, false)
            .build()
            .unwrap();
        assert_eq!(approx_ftf_ellplus1(&inst).unwrap().ids(), &[0, 1]);
        assert_eq!(approx_ftf_2(&inst).unwrap().ids(), &[0, 1]);
    }

    #[test]
    fn diamond_with_ell_one_takes_both_routes() {
        let inst = InstanceBuilder::new(Mode::Ftf { ell: 1 })
            .arc("s", "a", 1, true)
            .arc("s", "b", 1, true)
            .arc("a", "t", 1, true)
            .arc("b", "t", 1, true)
            .build()
            .unwrap();
        assert_eq!(approx_ftf_ellplus1(&inst).unwrap().cost(), Weight::from_integer(4));
        assert_eq!(approx_ftf_2(&inst).unwrap().cost(), Weight::from_integer(4));
    }

    #[test]
    fn three_parallel_for_ell_two() {
        let inst = parallel(3, 2);
        let sol = approx_ftf_ellplus1(&inst).unwrap();
        assert_eq!(sol.len(), 3);
        assert!(ftf_feasible_enum(&inst, &sol).feasible);
        assert_eq!(approx_ftf_2(&inst).unwrap().len(), 3);
    }

    #[test]
    fn infeasible_instance() {
        let inst = parallel(2, 2);
        assert!(matches!(approx_ftf_ellplus1(&inst), Err(SolveError::Infeasible { .. })));
        assert!(matches!(approx_ftf_2(&inst), Err(SolveError::Infeasible { .. })));
    }

    #[test]
    fn all_safe_base_needs_nothing() {
        let inst = InstanceBuilder::new(Mode::Ftf { ell: 1 })
            .arc("s", "a", 1, false)
            .arc("a", "t", 1, false)
            .arc("s", "t", 1, true)
            .build()
            .unwrap();
        let x0 = ArcSet::from_ids(&inst, [0, 1]);
        let ps = PathSystem::from_arcs(&inst, &x0, 1).unwrap();
        assert!(residual_feasibility_check(&inst, &ps, &ArcSet::empty()));
        let y = solve_augmentation(&inst, &ps, &Budget::default(), LinkRule::Pairwise).unwrap();
        assert!(y.is_empty());
        let mut g = build_aux_graph(&inst, &ps, &Budget::default(), LinkRule::Pairwise);
        let start = g.start();
        assert!(g.successors(&start).unwrap().iter().all(|l| l.kind == LinkKind::A1));
    }

    #[test]
    fn detour_is_bought() {
        // s->a->t with a->t vulnerable; backup a->b->t costs 7
        let inst = InstanceBuilder::new(Mode::Ftf { ell: 1 })
            .arc("s", "a", 1, false)
            .arc("a", "t", 1, true)
            .arc("a", "b", 3, false)
            .arc("b", "t", 4, false)
            .build()
            .unwrap();
        let x0 = ArcSet::from_ids(&inst, [0, 1]);
        let ps = PathSystem::from_arcs(&inst, &x0, 1).unwrap();
        assert!(!residual_feasibility_check(&inst, &ps, &ArcSet::empty()));
        let y = solve_augmentation(&inst, &ps, &Budget::default(), LinkRule::Pairwise).unwrap();
        assert_eq!(y.ids(), &[2, 3]);
        assert_eq!(y.cost(), Weight::from_integer(7));
        assert!(residual_feasibility_check(&inst, &ps, &y));

        let mut g = build_aux_graph(&inst, &ps, &Budget::default(), LinkRule::Pairwise);
        let links = g.successors(&alloc::vec![1]).unwrap();
        let a2: alloc::vec::Vec<_> = links.iter().filter(|l| l.kind == LinkKind::A2).collect();
        assert_eq!(a2.len(), 1);
        assert_eq!(a2[0].to, alloc::vec![2]);
        assert_eq!(a2[0].weight, Weight::from_integer(7));
    }

    #[test]
    fn base_without_enough_paths_is_rejected() {
        let inst = parallel(3, 2);
        let x0 = ArcSet::from_ids(&inst, [0]);
        assert!(PathSystem::from_arcs(&inst, &x0, 2).is_err());
    }
}
