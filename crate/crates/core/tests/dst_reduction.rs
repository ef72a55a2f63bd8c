use ftnet_core::dsn::{dsn_oracle, DsnArc, DsnInstance};
use ftnet_core::ftp::solve_kftp_dag;
use ftnet_core::testkit::{brute_force_ftp, generate, random_dst, GenSpec};
use ftnet_core::Budget;

// With k = m - 1 every terminal must stay reachable, so the FTP optimum of
// the reduction is the cheapest arc set reaching all terminals.
#[test]
fn reduction_optimum_is_steiner_optimum() {
    let b = Budget::default();
    for seed in 0..60 {
        let m = 1 + (seed % 3) as usize;
        let dst = random_dst(6, 4, m, 7, seed);
        let g = generate(&GenSpec::DstReduction { dst: dst.clone() }).unwrap();
        assert_eq!(g.instance.k(), Some(m - 1));
        let d = DsnInstance {
            vertex_count: dst.vertex_count,
            arcs: dst.arcs.iter().map(|&(tail, head, cost)| DsnArc { tail, head, cost }).collect(),
            pairs: dst.terminals.iter().map(|&t| (dst.root, t)).collect(),
        };
        let steiner = dsn_oracle(&d, &b).unwrap();
        let ftp = brute_force_ftp(&g.instance, &b).unwrap();
        assert_eq!(ftp.cost(), steiner.cost, "seed {seed}");
    }
}

#[test]
fn acyclic_reductions_match_the_dag_solver() {
    let b = Budget::default();
    let mut checked = 0;
    for seed in 100..200 {
        let dst = random_dst(6, 0, 2, 7, seed);
        let g = generate(&GenSpec::DstReduction { dst }).unwrap();
        let sol = solve_kftp_dag(&g.instance).unwrap();
        assert_eq!(sol.cost(), brute_force_ftp(&g.instance, &b).unwrap().cost(), "seed {seed}");
        checked += 1;
    }
    assert_eq!(checked, 100);
}
