//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! Run with `cargo test -p ftnet-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ftnet_core::approx::{approx_ftp_k, approx_ftp_kplus1};
use ftnet_core::dsn::{dsn_oracle, dsn_solve, DsnArc, DsnInstance};
use ftnet_core::feasibility::{
    ftf_feasible_cut, ftf_feasible_enum, ftf_survives, ftp_feasible_cut, ftp_feasible_cut_k, ftp_feasible_enum,
    ftp_survives, Verdict,
};
use ftnet_core::flow::{min_cost_flow, CapacityProfile};
use ftnet_core::ftf::{approx_ftf_2, approx_ftf_ellplus1, residual_feasibility_check, solve_augmentation, LinkRule, PathSystem};
use ftnet_core::ftp::{oriented_instance, solve_1ftp, solve_ftp_series_parallel, solve_kftp_dag, sp_recognize};
use ftnet_core::testkit::{
    brute_force_augmentation, brute_force_ftf, brute_force_ftp, brute_force_ftp_k, generate, ArcParams, GenSpec,
};
use ftnet_core::transform::to_directed;
use ftnet_core::{Arc, ArcSet, Budget, Instance, Mode, SolveError, Weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// wall-clock ceilings per criterion
const GAP_LIMIT: Duration = Duration::from_secs(5);
const EXACT_LIMIT: Duration = Duration::from_secs(120);
const AUGMENT_LIMIT: Duration = Duration::from_secs(300);

const EXACT_CORPUS: u64 = 220;
const SP_TREES: u64 = 120;
const AUGMENT_CASES: usize = 400;
const FTF_CASES: usize = 110;
const VERIFIER_PAIRS: usize = 1200;
const UNDIRECTED_CASES: usize = 60;
const DSN_CASES: usize = 320;

type Outcome = Result<String, String>;

fn w(n: i64) -> Weight {
    Weight::from_integer(n)
}

fn cost_of(r: &Result<ArcSet, SolveError>) -> Option<Weight> {
    r.as_ref().ok().map(|s| s.cost())
}

/// Same verdict (solvable or infeasible) and, when solvable, same cost.
fn agree(name: &str, solver: &Result<ArcSet, SolveError>, oracle: &Result<ArcSet, SolveError>) -> Result<(), String> {
    match (solver, oracle) {
        (Ok(a), Ok(b)) if a.cost() == b.cost() => Ok(()),
        (Err(SolveError::Infeasible { .. }), Err(SolveError::Infeasible { .. })) => Ok(()),
        _ => Err(format!("{name}: solver {:?} vs oracle {:?}", solver.as_ref().map(|s| s.cost()), oracle.as_ref().map(|s| s.cost()))),
    }
}

fn both_ftp_verifiers(inst: &Instance, s: &ArcSet) -> bool {
    ftp_feasible_cut(inst, s).feasible && ftp_feasible_enum(inst, s, &Budget::default()).map(|v| v.feasible).unwrap_or(false)
}

fn both_ftf_verifiers(inst: &Instance, s: &ArcSet) -> bool {
    ftf_feasible_cut(inst, s).feasible && ftf_feasible_enum(inst, s).feasible
}

fn params(vulnerable_pct: u32) -> ArcParams {
    ArcParams { vulnerable_pct, min_weight: 1, max_weight: 9 }
}

/// Criterion 1: the parallel-arc gap family.
fn gap_family() -> Outcome {
    let start = Instant::now();
    for (p, k) in [(5usize, 1usize), (10, 2), (50, 3)] {
        let g = generate(&GenSpec::Parallel { p, k }).map_err(|e| e.to_string())?;
        let inst = &g.instance;
        let fractional = Weight::new(p as i64, (p - k) as i64);
        let expected_ratio = Weight::new(((k + 1) * (p - k)) as i64, p as i64);
        let tree = sp_recognize(inst).map_err(|e| e.to_string())?;
        let sp = solve_ftp_series_parallel(inst, &tree, k).map_err(|e| e.to_string())?;
        let mut results: Vec<(&str, Result<ArcSet, SolveError>)> = vec![
            ("kftp-dag", solve_kftp_dag(inst)),
            ("ftp-sp", sp[k].clone().ok_or(SolveError::Infeasible { witness: ArcSet::empty() })),
            ("approx-k1", approx_ftp_kplus1(inst)),
            ("approx-k", approx_ftp_k(inst)),
        ];
        if k == 1 {
            results.push(("1ftp", solve_1ftp(inst)));
        }
        for (name, r) in results {
            let s = r.map_err(|e| format!("({p},{k}) {name}: {e}"))?;
            if s.cost() != w(k as i64 + 1) || s.len() != k + 1 {
                return Err(format!("({p},{k}) {name}: cost {} with {} arcs", s.cost(), s.len()));
            }
            if s.cost() / fractional != expected_ratio {
                return Err(format!("({p},{k}) {name}: ratio {}", s.cost() / fractional));
            }
            if !ftp_feasible_cut(inst, &s).feasible {
                return Err(format!("({p},{k}) {name}: infeasible output"));
            }
        }
    }
    let took = start.elapsed();
    if took >= GAP_LIMIT {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("3 families, exact ratios, {took:.2?}"))
}

/// Seeded corpus shared by criteria 2 and 4: general digraphs with k = 1
/// and DAGs with k in {1, 2}.
fn exact_corpus() -> Vec<(Instance, bool)> {
    let mut out = Vec::new();
    for seed in 0..EXACT_CORPUS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(4..=8);
        let arcs = rng.gen_range(n..=14);
        let pct = rng.gen_range(30..=70);
        let dag = seed % 2 == 1;
        let spec = if dag {
            let k = 1 + (seed / 2 % 2) as usize;
            GenSpec::RandomDag { n, layers: rng.gen_range(2..=4), arcs, params: params(pct), mode: Mode::Ftp { k }, seed }
        } else {
            GenSpec::Random { n, arcs, params: params(pct), mode: Mode::Ftp { k: 1 }, directed: true, seed }
        };
        out.push((generate(&spec).expect("valid spec").instance, dag));
    }
    out
}

/// Criterion 2: exact solvers against the brute-force oracle.
fn exact_solvers(corpus: &[(Instance, bool)], optima: &[Result<ArcSet, SolveError>]) -> Outcome {
    let start = Instant::now();
    let (mut one, mut dag) = (0, 0);
    let feasible = optima.iter().filter(|o| o.is_ok()).count();
    for ((inst, is_dag), opt) in corpus.iter().zip(optima) {
        if inst.k() == Some(1) {
            agree(inst.name(), &solve_1ftp(inst), opt)?;
            one += 1;
        }
        if *is_dag {
            agree(inst.name(), &solve_kftp_dag(inst), opt)?;
            dag += 1;
        }
    }
    let took = start.elapsed();
    if took >= EXACT_LIMIT {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{} instances ({feasible} feasible, {one} 1-FTP runs, {dag} DAG runs), {took:.2?}", corpus.len()))
}

/// Criterion 3: Algorithm-1 style DP on series-parallel trees.
fn series_parallel() -> Outcome {
    let b = Budget::default();
    let mut checked = 0;
    for seed in 0..SP_TREES {
        let g = generate(&GenSpec::RandomSp {
            depth: 6,
            max_arcs: 12,
            params: params(60),
            mode: Mode::Ftp { k: 3 },
            seed,
        })
        .expect("valid spec");
        let inst = &g.instance;
        let tree = g.tree.expect("tree");
        let sols = solve_ftp_series_parallel(inst, &tree, 3).map_err(|e| e.to_string())?;
        let oriented = oriented_instance(inst, &tree);
        let mut last = None;
        for (i, s) in sols.iter().enumerate() {
            let oracle = brute_force_ftp_k(inst, i, &b);
            match (s, &oracle) {
                (None, Err(SolveError::Infeasible { .. })) => {}
                (Some(s), Ok(o)) if s.cost() == o.cost() => {
                    if !ftp_feasible_cut_k(&oriented, s, i).feasible {
                        return Err(format!("{} k={i}: output infeasible", inst.name()));
                    }
                    if last.is_some_and(|c| c > s.cost()) {
                        return Err(format!("{} k={i}: cost not monotone", inst.name()));
                    }
                    last = Some(s.cost());
                }
                _ => return Err(format!("{} k={i}: {:?} vs {:?}", inst.name(), s.as_ref().map(|s| s.cost()), cost_of(&oracle))),
            }
            checked += 1;
        }
    }
    Ok(format!("{SP_TREES} trees, {checked} parameter checks"))
}

/// Criterion 4: approximation ratios on the exact corpus.
fn approximations(corpus: &[(Instance, bool)], optima: &[Result<ArcSet, SolveError>]) -> Outcome {
    let mut worst_k1 = Weight::from_integer(0);
    let mut worst_k = Weight::from_integer(0);
    for ((inst, _), opt) in corpus.iter().zip(optima) {
        let k = inst.k().unwrap() as i64;
        let a1 = approx_ftp_kplus1(inst);
        let a2 = approx_ftp_k(inst);
        match opt {
            Err(SolveError::Infeasible { .. }) => {
                if !matches!(a1, Err(SolveError::Infeasible { .. })) || !matches!(a2, Err(SolveError::Infeasible { .. })) {
                    return Err(format!("{}: approximation on an infeasible instance", inst.name()));
                }
            }
            Ok(o) => {
                let a1 = a1.map_err(|e| format!("{}: approx-k1 {e}", inst.name()))?;
                let a2 = a2.map_err(|e| format!("{}: approx-k {e}", inst.name()))?;
                if !both_ftp_verifiers(inst, &a1) || !both_ftp_verifiers(inst, &a2) {
                    return Err(format!("{}: infeasible approximation", inst.name()));
                }
                if a1.cost() > w(k + 1) * o.cost() || a2.cost() > w(k) * o.cost() {
                    return Err(format!("{}: ratio bound broken", inst.name()));
                }
                if o.cost() > w(0) {
                    worst_k1 = worst_k1.max(a1.cost() / o.cost());
                    worst_k = worst_k.max(a2.cost() / o.cost());
                }
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!("{} instances, worst ratios {worst_k1} and {worst_k}", corpus.len()))
}

/// Random FTF instance plus a base path system; odd seeds pick the base
/// with scrambled weights so it is not always the cheapest one.
fn augmentation_case(seed: u64) -> Option<(Instance, PathSystem)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ell = 1 + (seed % 2) as usize;
    let n = rng.gen_range(4..=8);
    let arcs = rng.gen_range(n + 2..=14);
    let spec = GenSpec::Random { n, arcs, params: params(rng.gen_range(40..=90)), mode: Mode::Ftf { ell }, directed: true, seed };
    let inst = generate(&spec).ok()?.instance;
    let pricing = if seed % 4 >= 2 {
        let arcs: Vec<Arc> =
            inst.arcs().iter().map(|a| Arc { weight: w(rng.gen_range(1..=9)), ..a.clone() }).collect();
        Instance::new("", true, inst.mode(), inst.vertices().to_vec(), arcs, inst.source(), inst.sink()).ok()?
    } else {
        inst.clone()
    };
    let x0 = min_cost_flow(&pricing, &CapacityProfile::unit(&pricing), ell as u64).ok()?.support;
    let x0 = ArcSet::from_ids(&inst, x0.ids().iter().copied());
    if inst.arcs().len() - x0.len() > 16 {
        return None;
    }
    let ps = PathSystem::from_arcs(&inst, &x0, ell).ok()?;
    Some((inst, ps))
}

/// Criterion 5: exact augmentation, under both link rules.
fn augmentation() -> Outcome {
    let start = Instant::now();
    let b = Budget::default();
    let mut cases = 0;
    let mut ell2 = 0;
    let mut bought = 0;
    let mut seed = 0;
    while cases < AUGMENT_CASES {
        seed += 1;
        let Some((inst, ps)) = augmentation_case(seed) else { continue };
        let oracle = brute_force_augmentation(&inst, &ps.base, &b);
        let pairwise = solve_augmentation(&inst, &ps, &b, LinkRule::Pairwise);
        agree(&format!("augment seed {seed} (pairwise rule)"), &pairwise, &oracle)?;
        let y = solve_augmentation(&inst, &ps, &b, LinkRule::SingleComponent);
        agree(&format!("augment seed {seed}"), &y, &oracle)?;
        if let Ok(y) = &y {
            if y.ids().iter().any(|&id| ps.base.contains(id)) {
                return Err(format!("seed {seed}: Y meets X0"));
            }
            if !ftf_feasible_cut(&inst, &ps.base.union(y, &inst)).feasible || !residual_feasibility_check(&inst, &ps, y) {
                return Err(format!("seed {seed}: X0 + Y infeasible"));
            }
        }
        cases += 1;
        ell2 += (ps.ell() == 2) as usize;
        bought += y.as_ref().is_ok_and(|y| !y.is_empty()) as usize;
    }
    let took = start.elapsed();
    if took >= AUGMENT_LIMIT {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{cases} instances ({ell2} with ell = 2, {bought} non-empty Y), {took:.2?}"))
}

/// Criterion 6: FTF approximation ratios.
fn ftf_ratios() -> Outcome {
    let b = Budget::default();
    let mut cases = 0;
    let mut feasible = 0;
    let mut seed = 1000;
    while cases < FTF_CASES {
        seed += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ell = 1 + (seed % 2) as usize;
        let n = rng.gen_range(4..=8);
        let arcs = rng.gen_range(n + 2..=14);
        let spec =
            GenSpec::Random { n, arcs, params: params(rng.gen_range(20..=60)), mode: Mode::Ftf { ell }, directed: true, seed };
        let inst = generate(&spec).expect("valid spec").instance;
        let opt = brute_force_ftf(&inst, &b);
        let a1 = approx_ftf_ellplus1(&inst);
        let a2 = approx_ftf_2(&inst);
        cases += 1;
        match opt {
            Err(SolveError::Infeasible { .. }) => {
                if !matches!(a1, Err(SolveError::Infeasible { .. })) || !matches!(a2, Err(SolveError::Infeasible { .. })) {
                    return Err(format!("{}: approximation on an infeasible instance", inst.name()));
                }
            }
            Ok(o) => {
                feasible += 1;
                let a1 = a1.map_err(|e| format!("{}: ell+1 {e}", inst.name()))?;
                let a2 = a2.map_err(|e| format!("{}: 2-approx {e}", inst.name()))?;
                if !both_ftf_verifiers(&inst, &a1) || !both_ftf_verifiers(&inst, &a2) {
                    return Err(format!("{}: infeasible approximation", inst.name()));
                }
                if a1.cost() > w(ell as i64 + 1) * o.cost() || a2.cost() > w(2) * o.cost() {
                    return Err(format!("{}: ratio bound broken", inst.name()));
                }
                if ell == 1 {
                    let as_ftp = inst.with_mode(Mode::Ftp { k: 1 }).unwrap();
                    let exact = solve_1ftp(&as_ftp).map_err(|e| e.to_string())?;
                    if a2.cost() > w(2) * exact.cost() {
                        return Err(format!("{}: 2-approx above twice the 1-FTP optimum", inst.name()));
                    }
                }
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!("{cases} instances ({feasible} feasible)"))
}

fn replays(inst: &Instance, s: &ArcSet, v: &Verdict) -> bool {
    match (&v.witness, inst.mode()) {
        (None, _) => true,
        (Some(f), Mode::Ftp { k }) => f.len() <= k && !ftp_survives(inst, s, f),
        (Some(f), Mode::Ftf { ell }) => f.len() <= 1 && !ftf_survives(inst, s, f, ell),
    }
}

/// Criterion 7: cut, enumeration and residual verifiers agree.
fn verifier_agreement() -> Outcome {
    let b = Budget::default();
    let (mut ftp, mut ftf, mut residual) = (0, 0, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut i = 0u64;
    while ftp + ftf + residual < VERIFIER_PAIRS {
        i += 1;
        let n = rng.gen_range(3..=8);
        let arcs = rng.gen_range(n..=16);
        let directed = i % 5 != 0;
        let mode = if i % 2 == 0 { Mode::Ftp { k: rng.gen_range(0..=3) } } else { Mode::Ftf { ell: rng.gen_range(1..=3) } };
        let spec = GenSpec::Random { n, arcs, params: params(rng.gen_range(20..=80)), mode, directed, seed: 5000 + i };
        let inst = generate(&spec).expect("valid spec").instance;
        for _ in 0..3 {
            let keep = rng.gen_range(40..=100);
            let s = ArcSet::from_ids(&inst, (0..inst.arcs().len()).filter(|_| rng.gen_range(0..100) < keep));
            match mode {
                Mode::Ftp { .. } => {
                    let c = ftp_feasible_cut(&inst, &s);
                    let e = ftp_feasible_enum(&inst, &s, &b).map_err(|e| e.to_string())?;
                    if c.feasible != e.feasible || !replays(&inst, &s, &c) || !replays(&inst, &s, &e) {
                        return Err(format!("FTP disagreement on {} subset {:?}", inst.name(), s.ids()));
                    }
                    ftp += 1;
                }
                Mode::Ftf { .. } => {
                    let c = ftf_feasible_cut(&inst, &s);
                    let e = ftf_feasible_enum(&inst, &s);
                    if c.feasible != e.feasible || !replays(&inst, &s, &c) || !replays(&inst, &s, &e) {
                        return Err(format!("FTF disagreement on {} subset {:?}", inst.name(), s.ids()));
                    }
                    ftf += 1;
                }
            }
        }
        if let (Mode::Ftf { ell }, true) = (mode, directed) {
            let Ok(f) = min_cost_flow(&inst, &CapacityProfile::unit(&inst), ell as u64) else { continue };
            let ps = PathSystem::from_arcs(&inst, &f.support, ell).map_err(|e| e.to_string())?;
            for _ in 0..3 {
                let y = ArcSet::from_ids(&inst, (0..inst.arcs().len()).filter(|&id| !f.support.contains(id) && rng.gen_bool(0.6)));
                let r = residual_feasibility_check(&inst, &ps, &y);
                let e = ftf_feasible_enum(&inst, &f.support.union(&y, &inst)).feasible;
                if r != e {
                    return Err(format!("residual disagreement on {} Y {:?}", inst.name(), y.ids()));
                }
                residual += 1;
            }
        }
    }
    Ok(format!("{} pairs ({ftp} FTP, {ftf} FTF, {residual} residual), 0 disagreements", ftp + ftf + residual))
}

/// Criterion 8: orienting an undirected instance keeps the optimum.
fn undirected() -> Outcome {
    let b = Budget::default();
    let mut feasible = 0;
    for seed in 0..UNDIRECTED_CASES as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + seed);
        let n = rng.gen_range(3..=7);
        let edges = rng.gen_range(n..=10);
        let k = (seed % 3) as usize;
        let spec =
            GenSpec::Random { n, arcs: edges, params: params(rng.gen_range(30..=80)), mode: Mode::Ftp { k }, directed: false, seed };
        let inst = generate(&spec).expect("valid spec").instance;
        let undirected_opt = brute_force_ftp(&inst, &b);
        let (directed, _) = to_directed(&inst).map_err(|e| e.to_string())?;
        let directed_opt = brute_force_ftp(&directed, &b);
        agree(inst.name(), &directed_opt, &undirected_opt)?;
        if k == 1 {
            agree(inst.name(), &solve_1ftp(&directed), &undirected_opt)?;
        }
        feasible += undirected_opt.is_ok() as usize;
    }
    Ok(format!("{UNDIRECTED_CASES} instances ({feasible} feasible)"))
}

/// Criterion 9: branch-and-bound Steiner network against the oracle.
fn dsn() -> Outcome {
    let b = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut feasible = 0;
    for _ in 0..DSN_CASES {
        let n = rng.gen_range(4..=9);
        let priced = rng.gen_range(n..=18);
        let free = rng.gen_range(0..=3);
        let mut arcs = Vec::new();
        while arcs.len() < priced + free {
            let (a, h) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != h {
                let cost = if arcs.len() < priced { w(rng.gen_range(1..=9)) } else { w(0) };
                arcs.push(DsnArc { tail: a, head: h, cost });
            }
        }
        let p = rng.gen_range(1..=3);
        let pairs = (0..p).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        let d = DsnInstance { vertex_count: n, arcs, pairs };
        match (dsn_solve(&d, &b), dsn_oracle(&d, &b)) {
            (Ok(x), Ok(y)) if x.cost == y.cost => {
                feasible += 1;
                // minimality over priced arcs
                for &e in &x.arcs {
                    if d.arcs[e].cost > w(0) {
                        let rest: Vec<usize> = x.arcs.iter().copied().filter(|&f| f != e).collect();
                        let reduced = DsnInstance {
                            vertex_count: n,
                            arcs: rest.iter().map(|&f| d.arcs[f].clone()).collect(),
                            pairs: d.pairs.clone(),
                        };
                        if dsn_oracle(&reduced, &b).is_ok() {
                            return Err("non-minimal Steiner solution".into());
                        }
                    }
                }
            }
            (Err(SolveError::Infeasible { .. }), Err(SolveError::Infeasible { .. })) => {}
            (x, y) => return Err(format!("{:?} vs {:?}", x.map(|s| s.cost), y.map(|s| s.cost))),
        }
    }
    Ok(format!("{DSN_CASES} instances ({feasible} feasible)"))
}

fn main() -> ExitCode {
    let corpus = exact_corpus();
    let b = Budget::default();
    let optima: Vec<_> = corpus.iter().map(|(inst, _)| brute_force_ftp(inst, &b)).collect();

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 integrality-gap family", Box::new(gap_family)),
        ("2 exact solvers vs oracle", Box::new(|| exact_solvers(&corpus, &optima))),
        ("3 series-parallel exactness", Box::new(series_parallel)),
        ("4 FTP approximation ratios", Box::new(|| approximations(&corpus, &optima))),
        ("5 augmentation optimality", Box::new(augmentation)),
        ("6 FTF approximation ratios", Box::new(ftf_ratios)),
        ("7 verifier agreement", Box::new(verifier_agreement)),
        ("8 undirected reduction", Box::new(undirected)),
        ("9 Steiner network subsolver", Box::new(dsn)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({detail}; {took:.2?})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({detail}; {took:.2?})");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
