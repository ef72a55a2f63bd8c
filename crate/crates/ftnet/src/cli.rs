//! Command implementations behind the `ftnet` binary.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ftnet_core::approx::{approx_ftp_k, approx_ftp_kplus1};
use ftnet_core::feasibility::{
    ftf_feasible_cut, ftf_feasible_enum, ftf_survives, ftp_feasible_cut, ftp_feasible_enum, ftp_survives, Verdict,
};
use ftnet_core::flow::{min_cost_flow, CapacityProfile};
use ftnet_core::ftf::{approx_ftf_ellplus1, solve_augmentation, LinkRule, PathSystem};
use ftnet_core::ftp::{solve_1ftp, solve_ftp_series_parallel, solve_kftp_dag_with, sp_recognize, SpTree};
use ftnet_core::testkit::{
    brute_force_augmentation, brute_force_ftf, brute_force_ftp, generate, random_dst, ArcParams, GenSpec,
};
use ftnet_core::transform::{edges_of, to_directed};
use ftnet_core::{ArcSet, Budget, Instance, Mode, SolveError, Weight};

use crate::format::{parse_instance, parse_solution, serialize_instance, serialize_solution, Document, Solution};
use crate::report::{fingerprint, id_list, RunReport};

#[derive(Debug, Parser)]
#[command(name = "ftnet", version, about = "Fault-tolerant path and flow network design")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a solver and write a solution file.
    Solve(SolveArgs),
    /// Check a solution with both the cut and the enumeration verifier.
    Verify(VerifyArgs),
    /// Generate an instance file.
    Gen(GenArgs),
    /// Brute-force optimum of a small instance.
    Oracle(OracleArgs),
    /// Solve and verify a generated corpus.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Algorithm {
    #[value(name = "1ftp")]
    OneFtp,
    #[value(name = "kftp-dag")]
    KftpDag,
    #[value(name = "ftp-sp")]
    FtpSp,
    #[value(name = "ftp-approx-k1")]
    FtpApproxK1,
    #[value(name = "ftp-approx-k")]
    FtpApproxK,
    #[value(name = "ftf-approx-l1")]
    FtfApproxL1,
    #[value(name = "ftf-approx-2")]
    FtfApprox2,
    #[value(name = "augment")]
    Augment,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::OneFtp => "1ftp",
            Algorithm::KftpDag => "kftp-dag",
            Algorithm::FtpSp => "ftp-sp",
            Algorithm::FtpApproxK1 => "ftp-approx-k1",
            Algorithm::FtpApproxK => "ftp-approx-k",
            Algorithm::FtfApproxL1 => "ftf-approx-l1",
            Algorithm::FtfApprox2 => "ftf-approx-2",
            Algorithm::Augment => "augment",
        }
    }

    fn exact(self) -> bool {
        matches!(self, Algorithm::OneFtp | Algorithm::KftpDag | Algorithm::FtpSp | Algorithm::Augment)
    }

    /// Proven bound on cost / optimum.
    fn ratio_bound(self, mode: Mode) -> Weight {
        let w = |n: usize| Weight::from_integer(n as i64);
        match (self, mode) {
            (Algorithm::FtpApproxK1, Mode::Ftp { k }) => w(k + 1),
            (Algorithm::FtpApproxK, Mode::Ftp { k }) => w(k.max(1)),
            (Algorithm::FtfApproxL1, Mode::Ftf { ell }) => w(ell + 1),
            (Algorithm::FtfApprox2, _) => w(2),
            _ => w(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LinkRuleArg {
    Pairwise,
    SingleComponent,
}

impl From<LinkRuleArg> for LinkRule {
    fn from(r: LinkRuleArg) -> Self {
        match r {
            LinkRuleArg::Pairwise => LinkRule::Pairwise,
            LinkRuleArg::SingleComponent => LinkRule::SingleComponent,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// `ALGORITHM INSTANCE`, or just `INSTANCE` together with `--algorithm`.
    #[arg(num_args = 1..=2, required = true, value_name = "ARGS")]
    pub args: Vec<String>,
    #[arg(long, value_enum)]
    pub algorithm: Option<Algorithm>,
    /// Solution path; defaults to the instance path with a `.sol` suffix.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// A scale factor, or `key=value` overrides such as `configurations=5000,aux_nodes=100`.
    #[arg(long)]
    pub budget: Option<String>,
    /// Decomposition tree for `ftp-sp`, inline or as a file path.
    #[arg(long)]
    pub tree: Option<String>,
    /// Base arc set for `augment`: comma-separated ids or a solution file.
    #[arg(long)]
    pub x0: Option<String>,
    #[arg(long, value_enum, default_value = "single-component")]
    pub link_rule: LinkRuleArg,
    /// Also run the brute-force oracle and report the ratio.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    pub solution: PathBuf,
    #[arg(long)]
    pub budget: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Parallel,
    Random,
    Dag,
    Sp,
    Dst,
}

#[derive(Debug, Clone, Args)]
pub struct GenParams {
    #[arg(long, default_value_t = 5)]
    pub p: usize,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Arc count for random and dag; defaults to 2n.
    #[arg(long)]
    pub arcs: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub layers: usize,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    #[arg(long, default_value_t = 12)]
    pub max_arcs: usize,
    #[arg(long, default_value_t = 50)]
    pub vulnerable_pct: u32,
    #[arg(long, default_value_t = 1)]
    pub min_weight: i64,
    #[arg(long, default_value_t = 9)]
    pub max_weight: i64,
    #[arg(long)]
    pub undirected: bool,
    /// Terminal count for dst.
    #[arg(long, default_value_t = 2)]
    pub terminals: usize,
    /// Extra non-tree arcs for dst.
    #[arg(long, default_value_t = 4)]
    pub extra: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl GenParams {
    fn mode(&self) -> Result<Mode> {
        match (self.k, self.ell) {
            (Some(_), Some(_)) => bail!("give at most one of --k and --ell"),
            (_, Some(ell)) => Ok(Mode::Ftf { ell }),
            (k, None) => Ok(Mode::Ftp { k: k.unwrap_or(1) }),
        }
    }

    pub fn spec(&self, family: Family, seed: u64) -> Result<GenSpec> {
        let mode = self.mode()?;
        let params =
            ArcParams { vulnerable_pct: self.vulnerable_pct, min_weight: self.min_weight, max_weight: self.max_weight };
        let arcs = self.arcs.unwrap_or(2 * self.n);
        if self.undirected && family != Family::Random {
            bail!("--undirected applies to the random family only");
        }
        Ok(match family {
            Family::Parallel => {
                let Mode::Ftp { k } = mode else { bail!("the parallel family is FTP only") };
                GenSpec::Parallel { p: self.p, k }
            }
            Family::Random => GenSpec::Random { n: self.n, arcs, params, mode, directed: !self.undirected, seed },
            Family::Dag => GenSpec::RandomDag { n: self.n, layers: self.layers, arcs, params, mode, seed },
            Family::Sp => GenSpec::RandomSp { depth: self.depth, max_arcs: self.max_arcs, params, mode, seed },
            Family::Dst => {
                if self.k.is_some() || self.ell.is_some() {
                    bail!("the dst family sets k = terminals - 1 itself");
                }
                let dst = random_dst(self.n, self.extra, self.terminals, self.max_weight, seed);
                GenSpec::DstReduction { dst }
            }
        })
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[command(flatten)]
    pub params: GenParams,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub instance: PathBuf,
    /// For FTF instances: optimize the augmentation of this base set instead.
    #[arg(long)]
    pub x0: Option<String>,
    #[arg(long)]
    pub budget: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[command(flatten)]
    pub params: GenParams,
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub oracle: bool,
    #[arg(long)]
    pub budget: Option<String>,
}

/// What a command prints and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;

pub fn run(cli: &Cli, echo: &str) -> Result<Outcome> {
    match &cli.command {
        Command::Solve(a) => solve(a, echo),
        Command::Verify(a) => verify(a, echo),
        Command::Gen(a) => gen(a, echo),
        Command::Oracle(a) => oracle(a, echo),
        Command::Bench(a) => bench(a, echo),
    }
}

pub fn parse_budget(text: Option<&str>) -> Result<Budget> {
    let Some(text) = text else { return Ok(Budget::default()) };
    if let Ok(factor) = text.trim().parse::<usize>() {
        return Ok(Budget::scaled(factor));
    }
    let mut b = Budget::default();
    for part in text.split(',') {
        let (key, value) = part.split_once('=').ok_or_else(|| anyhow!("bad budget entry '{part}'"))?;
        let value: usize = value.trim().parse().with_context(|| format!("bad budget value in '{part}'"))?;
        match key.trim().replace('-', "_").as_str() {
            "configurations" => b.configurations = value,
            "aux_nodes" => b.aux_nodes = value,
            "oracle_arcs" => b.oracle_arcs = value,
            "scenarios" => b.scenarios = value,
            "dsn_pairs" => b.dsn_pairs = value,
            other => bail!("unknown budget key '{other}'"),
        }
    }
    Ok(b)
}

fn read_instance(path: &Path) -> Result<Document> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("in {}", path.display()))
}

fn millis(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64() * 1000.0)
}

fn parse_x0(inst: &Instance, text: &str) -> Result<ArcSet> {
    let ids: Vec<usize> = if Path::new(text).is_file() {
        parse_solution(&fs::read_to_string(text)?)?.arcs
    } else {
        text.split(',').filter(|s| !s.trim().is_empty()).map(|s| s.trim().parse()).collect::<Result<_, _>>()?
    };
    if let Some(bad) = ids.iter().find(|&&id| id >= inst.arcs().len()) {
        bail!("arc id {bad} out of range");
    }
    Ok(ArcSet::from_ids(inst, ids))
}

fn parse_tree(inst: &Instance, text: &str) -> Result<SpTree> {
    let text = if Path::new(text).is_file() { fs::read_to_string(text)? } else { text.to_string() };
    Ok(SpTree::parse(inst, text.trim())?)
}

/// Inputs besides the instance that some algorithms take.
#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub budget: Budget,
    pub tree: Option<SpTree>,
    pub x0: Option<ArcSet>,
    pub rule: LinkRule,
}

#[derive(Debug, Clone)]
pub struct Solved {
    pub arcs: ArcSet,
    /// Extra report lines.
    pub extras: Vec<(&'static str, String)>,
    /// Base set and augmentation for the FTF path-system algorithms.
    pub split: Option<(ArcSet, ArcSet)>,
}

impl Solved {
    fn plain(arcs: ArcSet) -> Self {
        Solved { arcs, extras: Vec::new(), split: None }
    }
}

/// Runs an FTP solver on the orientation of an undirected instance and maps
/// the solution (or the witness) back to edges.
fn on_directed(
    inst: &Instance,
    solve: impl Fn(&Instance) -> Result<ArcSet, SolveError>,
) -> Result<ArcSet, SolveError> {
    if inst.directed() {
        return solve(inst);
    }
    let (directed, pairs) = to_directed(inst)?;
    match solve(&directed) {
        Ok(s) => Ok(edges_of(inst, &pairs, &s)),
        Err(SolveError::Infeasible { witness }) => Err(SolveError::Infeasible { witness: edges_of(inst, &pairs, &witness) }),
        Err(e) => Err(e),
    }
}

fn whole_graph_witness(inst: &Instance) -> ArcSet {
    let v = match inst.mode() {
        Mode::Ftp { .. } => ftp_feasible_cut(inst, &inst.all_arcs()),
        Mode::Ftf { .. } => ftf_feasible_cut(inst, &inst.all_arcs()),
    };
    v.witness.unwrap_or_default()
}

fn cheapest_paths(inst: &Instance, ell: usize) -> Result<ArcSet, SolveError> {
    match min_cost_flow(inst, &CapacityProfile::unit(inst), ell as u64) {
        Ok(f) => Ok(f.support),
        Err(SolveError::FlowInfeasible { .. }) => Err(SolveError::Infeasible { witness: whole_graph_witness(inst) }),
        Err(e) => Err(e),
    }
}

fn expect_ell(inst: &Instance) -> Result<usize, SolveError> {
    inst.ell().ok_or_else(|| SolveError::ModeMismatch("expected an FTF instance".into()))
}

fn augment(inst: &Instance, x0: Option<&ArcSet>, opts: &SolveOptions) -> Result<Solved, SolveError> {
    let ell = expect_ell(inst)?;
    if !inst.directed() {
        return Err(SolveError::Undirected);
    }
    let x0 = match x0 {
        Some(x) => x.clone(),
        None => cheapest_paths(inst, ell)?,
    };
    let ps = PathSystem::from_arcs(inst, &x0, ell)?;
    let y = match solve_augmentation(inst, &ps, &opts.budget, opts.rule) {
        Err(SolveError::Infeasible { witness }) if witness.is_empty() => {
            return Err(SolveError::Infeasible { witness: whole_graph_witness(inst) })
        }
        r => r?,
    };
    let arcs = x0.union(&y, inst);
    let extras = vec![
        ("base", id_list(x0.ids())),
        ("augmentation", id_list(y.ids())),
        ("augmentation_cost", y.cost().to_string()),
    ];
    Ok(Solved { arcs, extras, split: Some((x0, y)) })
}

pub fn run_algorithm(alg: Algorithm, inst: &Instance, opts: &SolveOptions) -> Result<Solved, SolveError> {
    match alg {
        Algorithm::OneFtp => on_directed(inst, solve_1ftp).map(Solved::plain),
        Algorithm::KftpDag => on_directed(inst, |d| solve_kftp_dag_with(d, &opts.budget)).map(Solved::plain),
        Algorithm::FtpApproxK1 => on_directed(inst, approx_ftp_kplus1).map(Solved::plain),
        Algorithm::FtpApproxK => on_directed(inst, approx_ftp_k).map(Solved::plain),
        Algorithm::FtpSp => {
            let k = inst.k().ok_or_else(|| SolveError::ModeMismatch("expected an FTP instance".into()))?;
            let tree = match &opts.tree {
                Some(t) => t.clone(),
                None => sp_recognize(inst)?,
            };
            let sols = solve_ftp_series_parallel(inst, &tree, k)?;
            let costs: Vec<String> =
                sols.iter().map(|s| s.as_ref().map_or("none".to_string(), |s| s.cost().to_string())).collect();
            let extras = vec![("tree", tree.to_string()), ("costs_by_k", format!("[{}]", costs.join(", ")))];
            match &sols[k] {
                Some(s) => Ok(Solved { arcs: s.clone(), extras, split: None }),
                None => Err(SolveError::Infeasible { witness: whole_graph_witness(inst) }),
            }
        }
        Algorithm::FtfApproxL1 => approx_ftf_ellplus1(inst).map(Solved::plain),
        Algorithm::FtfApprox2 => augment(inst, None, opts),
        Algorithm::Augment => augment(inst, opts.x0.as_ref(), opts),
    }
}

/// Both verifiers on `set`, which must agree. The witness comes from the
/// enumeration verifier (a smallest defeating scenario) and is replayed.
pub fn verify_both(inst: &Instance, set: &ArcSet, budget: &Budget) -> Result<Verdict> {
    let (cut, full) = match inst.mode() {
        Mode::Ftp { .. } => (ftp_feasible_cut(inst, set), ftp_feasible_enum(inst, set, budget)?),
        Mode::Ftf { .. } => (ftf_feasible_cut(inst, set), ftf_feasible_enum(inst, set)),
    };
    if cut.feasible != full.feasible {
        bail!("internal invariant violation: cut and enumeration verifiers disagree");
    }
    for w in [&cut.witness, &full.witness].into_iter().flatten() {
        let defeats = match inst.mode() {
            Mode::Ftp { .. } => !ftp_survives(inst, set, w),
            Mode::Ftf { ell } => !ftf_survives(inst, set, w, ell),
        };
        if !defeats {
            bail!("internal invariant violation: witness {:?} does not replay", w.ids());
        }
    }
    Ok(full)
}

/// Brute-force optimum cost, `None` when infeasible.
fn oracle_cost(inst: &Instance, x0: Option<&ArcSet>, budget: &Budget) -> Result<Option<Weight>, SolveError> {
    let r = match (inst.mode(), x0) {
        (Mode::Ftp { .. }, _) => brute_force_ftp(inst, budget),
        (Mode::Ftf { .. }, None) => brute_force_ftf(inst, budget),
        (Mode::Ftf { .. }, Some(x0)) => brute_force_augmentation(inst, x0, budget),
    };
    match r {
        Ok(s) => Ok(Some(s.cost())),
        Err(SolveError::Infeasible { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn ratio(cost: Weight, opt: Weight) -> String {
    if opt == Weight::from_integer(0) {
        if cost == opt { "1".into() } else { "inf".into() }
    } else {
        (cost / opt).to_string()
    }
}

fn resolve_algorithm(a: &SolveArgs) -> Result<(Algorithm, PathBuf)> {
    match (a.args.as_slice(), a.algorithm) {
        ([path], Some(alg)) => Ok((alg, PathBuf::from(path))),
        ([_], None) => bail!("no algorithm given"),
        ([name, path], flag) => {
            let alg = Algorithm::from_str(name, true).map_err(|_| anyhow!("unknown algorithm '{name}'"))?;
            if flag.is_some_and(|f| f != alg) {
                bail!("conflicting algorithms '{name}' and --algorithm");
            }
            Ok((alg, PathBuf::from(path)))
        }
        _ => bail!("expected ALGORITHM INSTANCE"),
    }
}

fn solution_path(instance: &Path, out: Option<&PathBuf>) -> PathBuf {
    out.cloned().unwrap_or_else(|| instance.with_extension("sol"))
}

fn header(report: &mut RunReport, path: &Path, inst: &Instance) {
    report.push("instance", path.display());
    report.push("name", inst.name());
    report.push("fingerprint", fingerprint(inst));
}

fn solve(a: &SolveArgs, echo: &str) -> Result<Outcome> {
    let (alg, path) = resolve_algorithm(a)?;
    let doc = read_instance(&path)?;
    let inst = &doc.instance;
    let tree = match (&a.tree, doc.annotations.iter().find(|(k, _)| k == "tree")) {
        (Some(t), _) => Some(parse_tree(inst, t)?),
        (None, Some((_, t))) if alg == Algorithm::FtpSp => Some(parse_tree(inst, t)?),
        _ => None,
    };
    let x0 = a.x0.as_deref().map(|t| parse_x0(inst, t)).transpose()?;
    let opts = SolveOptions { budget: parse_budget(a.budget.as_deref())?, tree, x0, rule: a.link_rule.into() };

    let start = Instant::now();
    let result = run_algorithm(alg, inst, &opts);
    let took = start.elapsed();

    let mut report = RunReport::new(echo);
    header(&mut report, &path, inst);
    report.push("solver", alg.name());
    let (solution, code) = match result {
        Ok(solved) => {
            let fast = match inst.mode() {
                Mode::Ftp { .. } => ftp_feasible_cut(inst, &solved.arcs),
                Mode::Ftf { .. } => ftf_feasible_cut(inst, &solved.arcs),
            };
            if !fast.feasible {
                bail!("internal invariant violation: {} returned an infeasible set", alg.name());
            }
            report.push("verdict", "feasible");
            report.push("cost", solved.arcs.cost());
            report.push("arcs", id_list(solved.arcs.ids()));
            for (k, v) in &solved.extras {
                report.push(k, v);
            }
            if a.oracle {
                let base = if alg == Algorithm::Augment { solved.split.as_ref().map(|(x0, _)| x0) } else { None };
                let measured = match (&solved.split, base) {
                    (Some((_, y)), Some(_)) => y.cost(),
                    _ => solved.arcs.cost(),
                };
                match oracle_cost(inst, base, &opts.budget)? {
                    Some(opt) => {
                        report.push("oracle_cost", opt);
                        report.push("oracle_ratio", ratio(measured, opt));
                    }
                    None => report.push("oracle_cost", "none"),
                }
            }
            let sol =
                Solution { arcs: solved.arcs.ids().to_vec(), cost: solved.arcs.cost(), feasible: true, witness_scenario: None };
            (sol, EXIT_OK)
        }
        Err(SolveError::Infeasible { witness }) => {
            report.push("verdict", "infeasible");
            report.push("witness_scenario", id_list(witness.ids()));
            if a.oracle {
                let opt = oracle_cost(inst, opts.x0.as_ref(), &opts.budget)?;
                report.push("oracle_cost", opt.map_or("none".to_string(), |o| o.to_string()));
            }
            let sol = Solution {
                arcs: Vec::new(),
                cost: Weight::from_integer(0),
                feasible: false,
                witness_scenario: Some(witness.ids().to_vec()),
            };
            (sol, EXIT_INFEASIBLE)
        }
        Err(e) => return Err(e.into()),
    };
    let out = solution_path(&path, a.out.as_ref());
    fs::write(&out, serialize_solution(&solution)).with_context(|| format!("cannot write {}", out.display()))?;
    report.push("solution_file", out.display());
    report.push("wall_time_ms", millis(took));
    Ok(Outcome { stdout: report.to_string(), code })
}

fn verify(a: &VerifyArgs, echo: &str) -> Result<Outcome> {
    let doc = read_instance(&a.instance)?;
    let inst = &doc.instance;
    let text = fs::read_to_string(&a.solution).with_context(|| format!("cannot read {}", a.solution.display()))?;
    let sol = parse_solution(&text).with_context(|| format!("in {}", a.solution.display()))?;
    if let Some(bad) = sol.arcs.iter().find(|&&id| id >= inst.arcs().len()) {
        bail!("solution references unknown arc {bad}");
    }
    let set = ArcSet::from_ids(inst, sol.arcs.iter().copied());
    let budget = parse_budget(a.budget.as_deref())?;

    let start = Instant::now();
    let verdict = verify_both(inst, &set, &budget)?;
    let took = start.elapsed();

    let mut report = RunReport::new(echo);
    header(&mut report, &a.instance, inst);
    report.push("verdict", if verdict.feasible { "feasible" } else { "infeasible" });
    report.push("cost", set.cost());
    if sol.cost != set.cost() {
        report.push("stated_cost", format!("{} (mismatch)", sol.cost));
    }
    report.push("arcs", id_list(set.ids()));
    report.push("cut=enum", "agree");
    if let Some(w) = &verdict.witness {
        report.push("witness_scenario", id_list(w.ids()));
    }
    report.push("wall_time_ms", millis(took));
    let code = if verdict.feasible { EXIT_OK } else { EXIT_INFEASIBLE };
    Ok(Outcome { stdout: report.to_string(), code })
}

fn generated_document(family: Family, params: &GenParams, seed: u64) -> Result<Document> {
    let g = generate(&params.spec(family, seed)?)?;
    let mut annotations = g.annotations;
    if let Some(tree) = &g.tree {
        annotations.push(("tree".to_string(), tree.to_string()));
    }
    Ok(Document { instance: g.instance, annotations })
}

fn gen(a: &GenArgs, echo: &str) -> Result<Outcome> {
    let doc = generated_document(a.family, &a.params, a.params.seed)?;
    let text = serialize_instance(&doc);
    let Some(out) = &a.out else { return Ok(Outcome { stdout: text, code: EXIT_OK }) };
    fs::write(out, &text).with_context(|| format!("cannot write {}", out.display()))?;
    let mut report = RunReport::new(echo);
    report.push("name", doc.instance.name());
    report.push("fingerprint", fingerprint(&doc.instance));
    report.push("vertices", doc.instance.vertex_count());
    report.push("arcs", doc.instance.arcs().len());
    for (k, v) in &doc.annotations {
        report.push(k, v);
    }
    report.push("file", out.display());
    Ok(Outcome { stdout: report.to_string(), code: EXIT_OK })
}

fn oracle(a: &OracleArgs, echo: &str) -> Result<Outcome> {
    let doc = read_instance(&a.instance)?;
    let inst = &doc.instance;
    let budget = parse_budget(a.budget.as_deref())?;
    let x0 = a.x0.as_deref().map(|t| parse_x0(inst, t)).transpose()?;
    if x0.is_some() && inst.ell().is_none() {
        bail!("--x0 needs an FTF instance");
    }

    let start = Instant::now();
    let result = match (inst.mode(), &x0) {
        (Mode::Ftp { .. }, _) => brute_force_ftp(inst, &budget),
        (Mode::Ftf { .. }, None) => brute_force_ftf(inst, &budget),
        (Mode::Ftf { .. }, Some(x0)) => brute_force_augmentation(inst, x0, &budget).map(|y| x0.union(&y, inst)),
    };
    let took = start.elapsed();

    let mut report = RunReport::new(echo);
    header(&mut report, &a.instance, inst);
    report.push("solver", "oracle");
    let (sol, code) = match result {
        Ok(best) => {
            let v = verify_both(inst, &best, &budget)?;
            if !v.feasible {
                bail!("internal invariant violation: oracle optimum fails verification");
            }
            report.push("verdict", "feasible");
            report.push("cost", best.cost());
            report.push("arcs", id_list(best.ids()));
            if let Some(x0) = &x0 {
                let y = best.difference(x0, inst);
                report.push("augmentation", id_list(y.ids()));
                report.push("augmentation_cost", y.cost());
            }
            report.push("certificate", "cut=feasible enum=feasible");
            (Solution { arcs: best.ids().to_vec(), cost: best.cost(), feasible: true, witness_scenario: None }, EXIT_OK)
        }
        Err(SolveError::Infeasible { .. }) => {
            let witness = whole_graph_witness(inst);
            report.push("verdict", "infeasible");
            report.push("witness_scenario", id_list(witness.ids()));
            report.push("certificate", "every arc set is defeated by the witness");
            let sol = Solution {
                arcs: Vec::new(),
                cost: Weight::from_integer(0),
                feasible: false,
                witness_scenario: Some(witness.ids().to_vec()),
            };
            (sol, EXIT_INFEASIBLE)
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(out) = &a.out {
        fs::write(out, serialize_solution(&sol)).with_context(|| format!("cannot write {}", out.display()))?;
        report.push("solution_file", out.display());
    }
    report.push("wall_time_ms", millis(took));
    Ok(Outcome { stdout: report.to_string(), code })
}

#[derive(Debug, Clone, Default)]
struct Tally {
    runs: usize,
    feasible: usize,
    infeasible: usize,
    skipped: usize,
    errors: usize,
    verified: usize,
    oracle_checked: usize,
    oracle_agree: usize,
    worst_ratio: Option<Weight>,
    time: Duration,
}

#[derive(Debug)]
enum RunStatus {
    Feasible { cost: Weight, verified: bool },
    Infeasible { verified: bool },
    Skipped,
    Error,
}

#[derive(Debug)]
struct Run {
    alg: Algorithm,
    status: RunStatus,
    /// Oracle optimum, when requested and within budget.
    oracle: Option<Option<Weight>>,
    time: Duration,
}

fn algorithms_for(inst: &Instance, family: Family) -> Vec<Algorithm> {
    match inst.mode() {
        Mode::Ftp { k } => {
            let mut v = Vec::new();
            if k == 1 {
                v.push(Algorithm::OneFtp);
            }
            if inst.directed() {
                v.push(Algorithm::KftpDag);
            }
            if family == Family::Sp {
                v.push(Algorithm::FtpSp);
            }
            v.push(Algorithm::FtpApproxK1);
            if k >= 1 {
                v.push(Algorithm::FtpApproxK);
            }
            v
        }
        Mode::Ftf { .. } => vec![Algorithm::FtfApproxL1, Algorithm::FtfApprox2],
    }
}

fn bench_instance(doc: &Document, family: Family, budget: &Budget, with_oracle: bool) -> Vec<Run> {
    let inst = &doc.instance;
    let tree = doc.annotations.iter().find(|(k, _)| k == "tree").and_then(|(_, t)| SpTree::parse(inst, t).ok());
    let opts = SolveOptions { budget: *budget, tree, x0: None, rule: LinkRule::default() };
    let opt = with_oracle.then(|| oracle_cost(inst, None, budget).ok()).flatten();
    algorithms_for(inst, family)
        .into_iter()
        .map(|alg| {
            let start = Instant::now();
            let r = run_algorithm(alg, inst, &opts);
            let status = match r {
                Ok(s) => {
                    let verified = verify_both(inst, &s.arcs, budget).is_ok_and(|v| v.feasible);
                    RunStatus::Feasible { cost: s.arcs.cost(), verified }
                }
                Err(SolveError::Infeasible { .. }) => {
                    let verified = verify_both(inst, &inst.all_arcs(), budget).is_ok_and(|v| !v.feasible);
                    RunStatus::Infeasible { verified }
                }
                Err(SolveError::Cyclic | SolveError::NotSeriesParallel(_)) => RunStatus::Skipped,
                Err(_) => RunStatus::Error,
            };
            Run { alg, status, oracle: opt, time: start.elapsed() }
        })
        .collect()
}

fn bench(a: &BenchArgs, echo: &str) -> Result<Outcome> {
    let budget = parse_budget(a.budget.as_deref())?;
    let docs: Vec<Document> = (0..a.count as u64)
        .map(|i| generated_document(a.family, &a.params, a.params.seed + i))
        .collect::<Result<_>>()?;
    let jobs = a.jobs.clamp(1, docs.len().max(1));
    let start = Instant::now();
    let mut results: Vec<(usize, Vec<Run>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let docs = &docs;
                let budget = &budget;
                scope.spawn(move || {
                    (j..docs.len())
                        .step_by(jobs)
                        .map(|i| (i, bench_instance(&docs[i], a.family, budget, a.oracle)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("bench worker panicked")).collect()
    });
    let took = start.elapsed();
    results.sort_by_key(|(i, _)| *i);

    let mut tallies: BTreeMap<Algorithm, Tally> = BTreeMap::new();
    let mut violations = 0;
    for (_, runs) in &results {
        for run in runs {
            let t = tallies.entry(run.alg).or_default();
            t.runs += 1;
            t.time += run.time;
            let bound = run.alg.ratio_bound(docs[0].instance.mode());
            match &run.status {
                RunStatus::Feasible { cost, verified } => {
                    t.feasible += 1;
                    t.verified += *verified as usize;
                    violations += !verified as usize;
                    if let Some(opt) = run.oracle {
                        t.oracle_checked += 1;
                        let ok = match opt {
                            Some(o) if o == Weight::from_integer(0) => *cost == o,
                            Some(o) => {
                                let r = *cost / o;
                                t.worst_ratio = Some(t.worst_ratio.map_or(r, |w| w.max(r)));
                                if run.alg.exact() { *cost == o } else { r <= bound }
                            }
                            None => false,
                        };
                        t.oracle_agree += ok as usize;
                        violations += !ok as usize;
                    }
                }
                RunStatus::Infeasible { verified } => {
                    t.infeasible += 1;
                    t.verified += *verified as usize;
                    violations += !verified as usize;
                    if let Some(opt) = run.oracle {
                        t.oracle_checked += 1;
                        t.oracle_agree += opt.is_none() as usize;
                        violations += opt.is_some() as usize;
                    }
                }
                RunStatus::Skipped => t.skipped += 1,
                RunStatus::Error => t.errors += 1,
            }
        }
    }

    let mut report = RunReport::new(echo);
    report.push("instances", docs.len());
    report.push("jobs", jobs);
    for (alg, t) in &tallies {
        let mut line = format!(
            "runs={} feasible={} infeasible={} skipped={} errors={} verified={}",
            t.runs, t.feasible, t.infeasible, t.skipped, t.errors, t.verified
        );
        if a.oracle {
            line.push_str(&format!(" oracle_agree={}/{}", t.oracle_agree, t.oracle_checked));
            if let Some(w) = t.worst_ratio {
                line.push_str(&format!(" worst_ratio={w}"));
            }
        }
        line.push_str(&format!(" time_ms={}", millis(t.time)));
        report.push(alg.name(), line);
    }
    report.push("violations", violations);
    report.push("wall_time_ms", millis(took));
    let code = if violations == 0 { EXIT_OK } else { EXIT_ERROR };
    Ok(Outcome { stdout: report.to_string(), code })
}
