use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lta_core::directions::{self, default_pool};
use lta_core::eval::{
    front_suite, gahss, rank_methods, standard_front, wilcoxon_rank_sum, CirSuite, ExactEstimator, R2HvcEstimator,
    STANDARD_FRONTS,
};
use lta_core::objective::{sample_front, validate_nondominated};
use lta_core::r2hvc::r2hvc_all;
use lta_core::trainer::generate_corpus;
use lta_core::{hvc_all, hypervolume, lta_train, DirectionSet, ReferencePoint, SolutionSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{read_corpus, write_corpus, Verify};
use crate::error::{CliError, CliResult};
use crate::format::{
    fmt_f64, parse_vector, read_directions, read_q_history, read_solution_csv, write_directions, write_json,
    write_q_history, write_solution_csv, write_values_csv, TOOL_VERSION,
};
use crate::plot::{cir_svg, q_history_svg};
use crate::report::{
    attach_ranks, read_cir_csv, CandidateInfo, CirConfig, CirMethod, CirReportFile, CirRun, DirectionInfo,
    FrontResult, GahssConfig, GahssReportFile, RankSumEntry,
};

/// Exact and line-based hypervolume contributions, direction vector generators and
/// direction set learning.
#[derive(Debug, Parser)]
#[command(name = "lta", version)]
pub struct Cli {
    /// Worker threads; defaults to one per core. Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a direction vector set.
    GenDirs(GenDirsArgs),
    /// Sample a training corpus with cached exact contributions.
    GenCorpus(GenCorpusArgs),
    /// Learn a direction set on a corpus.
    Train(TrainArgs),
    /// Correct identification rate of direction sets on standard fronts.
    EvalCir(EvalCirArgs),
    /// Greedy subset selection driven by R2-HVC.
    Gahss(GahssArgs),
    /// Exact hypervolume of a solution set.
    Hv(HvArgs),
    /// Exact or R2-HVC contributions of every member of a solution set.
    Hvc(HvcArgs),
    /// Render a learning curve or CIR summary to SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Das,
    Unv,
    Jas,
    MssD,
    MssU,
    KmeansU,
}

#[derive(Debug, Args)]
pub struct GenDirsArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long = "m")]
    pub m: usize,
    /// Lattice resolution (das only).
    #[arg(long = "H")]
    pub h: Option<usize>,
    /// Number of vectors (all methods except das).
    #[arg(long = "n")]
    pub n: Option<usize>,
    /// Candidate pool size for mss-d, mss-u and kmeans-u.
    #[arg(long)]
    pub pool: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenCorpusArgs {
    #[arg(long = "m")]
    pub m: usize,
    #[arg(long = "L")]
    pub sets: usize,
    #[arg(long = "N")]
    pub points: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long = "n")]
    pub n: usize,
    #[arg(long = "max-iterations")]
    pub max_iterations: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory for `directions.json` and `q_history.csv`.
    #[arg(long)]
    pub out: PathBuf,
    /// Recompute every cached contribution instead of a sample per set.
    #[arg(long)]
    pub verify_all: bool,
}

#[derive(Debug, Args)]
pub struct EvalCirArgs {
    /// Direction set files; files sharing a generator are runs of one method.
    #[arg(long = "dirs")]
    pub dirs: Vec<PathBuf>,
    /// Fronts to test; defaults to all six.
    #[arg(long = "front")]
    pub fronts: Vec<String>,
    #[arg(long = "m")]
    pub m: usize,
    #[arg(long = "M", default_value_t = 100)]
    pub sets: usize,
    #[arg(long = "N", default_value_t = 100)]
    pub points: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also evaluate the exact contributions, which must score 1.
    #[arg(long)]
    pub self_check: bool,
    /// Output directory for `cir.json` and `cir.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GahssArgs {
    #[arg(long)]
    pub dirs: PathBuf,
    #[arg(long)]
    pub k: usize,
    /// Candidate solution set CSV.
    #[arg(long, conflicts_with_all = ["front", "size"])]
    pub candidates: Option<PathBuf>,
    /// Sample candidates on this standard front instead.
    #[arg(long, requires = "size")]
    pub front: Option<String>,
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "ref", conflicts_with = "ref_factor")]
    pub reference: Option<String>,
    #[arg(long)]
    pub ref_factor: Option<f64>,
    /// Output directory for `gahss.json` and `subset.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct HvArgs {
    #[arg(long)]
    pub set: PathBuf,
    #[arg(long = "ref", conflicts_with = "ref_factor")]
    pub reference: Option<String>,
    #[arg(long)]
    pub ref_factor: Option<f64>,
}

#[derive(Debug, Args)]
pub struct HvcArgs {
    #[arg(long)]
    pub set: PathBuf,
    #[arg(long = "ref", conflicts_with = "ref_factor")]
    pub reference: Option<String>,
    #[arg(long)]
    pub ref_factor: Option<f64>,
    /// Use R2-HVC with these directions instead of exact contributions.
    #[arg(long)]
    pub dirs: Option<PathBuf>,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long, conflicts_with = "cir", required_unless_present = "cir")]
    pub history: Option<PathBuf>,
    #[arg(long)]
    pub cir: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::GenDirs(a) => gen_dirs(a),
        Command::GenCorpus(a) => gen_corpus(a),
        Command::Train(a) => train(a),
        Command::EvalCir(a) => eval_cir(a),
        Command::Gahss(a) => run_gahss(a),
        Command::Hv(a) => hv(a),
        Command::Hvc(a) => hvc(a),
        Command::Plot(a) => plot(a),
    })
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("using generated seed {s}");
        s
    })
}

fn usage(e: lta_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn gen_dirs(a: GenDirsArgs) -> CliResult<()> {
    let need_n = || a.n.ok_or_else(|| CliError::Usage("--n is required for this method".into()));
    let dirs = match a.method {
        Method::Das => {
            let h = a.h.ok_or_else(|| CliError::Usage("das takes --H".into()))?;
            directions::gen_das(a.m, h).map_err(usage)?
        }
        Method::MssD => {
            let n = need_n()?;
            directions::gen_mss_d(a.m, n, a.pool.unwrap_or_else(|| default_pool(n))).map_err(usage)?
        }
        method => {
            let n = need_n()?;
            let seed = resolve_seed(a.seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let out = match method {
                Method::Unv => directions::gen_unv(a.m, n, &mut rng),
                Method::Jas => directions::gen_jas(a.m, n, &mut rng),
                Method::MssU => {
                    directions::gen_mss_u(a.m, n, a.pool.unwrap_or_else(|| default_pool(n)), &mut rng)
                }
                _ => {
                    let pool = a.pool.unwrap_or_else(|| default_pool(n).max(10 * n));
                    directions::gen_kmeans_u(a.m, n, pool, &mut rng)
                }
            };
            out.map_err(usage)?.with_seed(Some(seed))
        }
    };
    write_directions(&a.out, &dirs)?;
    eprintln!("wrote {} directions to {}", dirs.len(), a.out.display());
    Ok(())
}

fn gen_corpus(a: GenCorpusArgs) -> CliResult<()> {
    if a.sets == 0 || a.points < 2 || a.m < 2 {
        return Err(CliError::Usage("need --L ≥ 1, --N ≥ 2 and --m ≥ 2".into()));
    }
    let seed = resolve_seed(a.seed);
    let corpus = generate_corpus(a.m, a.sets, a.points, seed)?;
    write_corpus(&a.out, &corpus)?;
    eprintln!("wrote {} sets to {}", corpus.len(), a.out.display());
    Ok(())
}

fn train(a: TrainArgs) -> CliResult<()> {
    if a.n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    let verify = if a.verify_all { Verify::All } else { Verify::Sample };
    let corpus = read_corpus(&a.corpus, verify)?;
    let seed = resolve_seed(a.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let result = lta_train(&corpus, a.n, a.max_iterations, &mut rng)?;
    let manifest = corpus.manifest();
    let mut provenance = result.learned.provenance().clone().with_param("N", manifest.points_per_set as u64);
    if let Some(s) = manifest.seed {
        provenance = provenance.with_param("corpus_seed", s);
    }
    provenance.seed = Some(seed);
    let mut learned = result.learned.clone();
    learned.set_provenance(provenance);
    write_directions(&a.out.join("directions.json"), &learned)?;
    write_q_history(&a.out.join("q_history.csv"), &result.q_history)?;
    eprintln!("Q: {} -> {}", fmt_f64(result.initial_q()), fmt_f64(result.final_q()));
    Ok(())
}

fn direction_info(path: &Path, dirs: &DirectionSet) -> DirectionInfo {
    let prov = dirs.provenance();
    DirectionInfo {
        source: path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
        generator: prov.generator.clone(),
        n: dirs.len(),
        seed: prov.seed,
        params: prov.params.iter().cloned().collect(),
    }
}

/// Seed of the test suite for front number `index`.
fn front_seed(seed: u64, index: usize) -> u64 {
    seed ^ ((index as u64) << 32)
}

fn eval_cir(a: EvalCirArgs) -> CliResult<()> {
    if a.dirs.is_empty() && !a.self_check {
        return Err(CliError::Usage("give at least one --dirs file or --self-check".into()));
    }
    if a.sets == 0 || a.points < 2 {
        return Err(CliError::Usage("need --M ≥ 1 and --N ≥ 2".into()));
    }
    let fronts: Vec<String> = if a.fronts.is_empty() {
        STANDARD_FRONTS.iter().map(|f| f.0.to_string()).collect()
    } else {
        a.fronts.clone()
    };
    let specs = fronts
        .iter()
        .map(|f| standard_front(f, a.m).map_err(usage))
        .collect::<CliResult<Vec<_>>>()?;

    // Group direction files by generator, keeping first-appearance order.
    let mut groups: Vec<(String, Vec<(PathBuf, DirectionSet)>)> = Vec::new();
    for path in &a.dirs {
        let dirs = read_directions(path)?;
        if dirs.dim() != a.m {
            return Err(CliError::validation(path, format!("directions have m = {}, expected {}", dirs.dim(), a.m)));
        }
        let name = dirs.provenance().generator.clone();
        match groups.iter_mut().find(|g| g.0 == name) {
            Some(g) => g.1.push((path.clone(), dirs)),
            None => groups.push((name, vec![(path.clone(), dirs)])),
        }
    }

    let seed = resolve_seed(a.seed);
    let mut runs: Vec<Vec<CirRun>> = groups
        .iter()
        .map(|g| g.1.iter().map(|(p, d)| CirRun { directions: Some(direction_info(p, d)), fronts: Vec::new() }).collect())
        .collect();
    let mut exact_run = CirRun { directions: None, fronts: Vec::new() };
    for (fi, (front, spec)) in fronts.iter().zip(&specs).enumerate() {
        let suite = CirSuite::new(front_suite(spec, a.sets, a.points, front_seed(seed, fi))?)?;
        for (g, group) in groups.iter().enumerate() {
            for (r, (_, dirs)) in group.1.iter().enumerate() {
                let report = suite.evaluate(&R2HvcEstimator(dirs))?;
                runs[g][r].fronts.push(FrontResult { front: front.clone(), rate: report.rate, correct: report.correct });
            }
        }
        if a.self_check {
            let report = suite.evaluate(&ExactEstimator)?;
            exact_run.fronts.push(FrontResult { front: front.clone(), rate: report.rate, correct: report.correct });
        }
    }

    let mut methods: Vec<CirMethod> = groups
        .into_iter()
        .zip(runs)
        .map(|((name, _), runs)| CirMethod { name, runs, mean: Vec::new(), ranks: Vec::new(), average_rank: 0.0 })
        .collect();
    if a.self_check {
        methods.push(CirMethod {
            name: "exact".into(),
            runs: vec![exact_run],
            mean: Vec::new(),
            ranks: Vec::new(),
            average_rank: 0.0,
        });
    }
    for m in &mut methods {
        m.mean = (0..fronts.len())
            .map(|f| m.runs.iter().map(|r| r.fronts[f].rate).sum::<f64>() / m.runs.len() as f64)
            .collect();
    }
    let scores: Vec<Vec<f64>> = methods.iter().map(|m| m.mean.clone()).collect();
    let table = rank_methods(&scores, true)?;
    attach_ranks(&mut methods, &table);

    let mut rank_sum = Vec::new();
    if let Some(best) = (0..methods.len()).min_by(|&x, &y| methods[x].average_rank.total_cmp(&methods[y].average_rank)) {
        for (i, other) in methods.iter().enumerate() {
            if i == best || other.runs.len() < 5 || methods[best].runs.len() < 5 {
                continue;
            }
            for (f, front) in fronts.iter().enumerate() {
                let x: Vec<f64> = methods[best].runs.iter().map(|r| r.fronts[f].rate).collect();
                let y: Vec<f64> = other.runs.iter().map(|r| r.fronts[f].rate).collect();
                let t = wilcoxon_rank_sum(&x, &y)?;
                rank_sum.push(RankSumEntry {
                    front: front.clone(),
                    method: methods[best].name.clone(),
                    versus: other.name.clone(),
                    statistic: t.statistic,
                    p_value: t.p_value,
                });
            }
        }
    }

    let report = CirReportFile {
        tool_version: TOOL_VERSION.to_string(),
        config: CirConfig {
            m: a.m,
            sets_per_front: a.sets,
            points: a.points,
            seed,
            fronts,
            self_check: a.self_check,
        },
        methods,
        rank_sum,
    };
    write_json(&a.out.join("cir.json"), &report)?;
    let csv_path = a.out.join("cir.csv");
    fs::write(&csv_path, report.to_csv()).map_err(|e| CliError::io(&csv_path, e))?;
    for m in &report.methods {
        let means: Vec<String> = m.mean.iter().map(|v| format!("{v:.3}")).collect();
        eprintln!("{:<12} CIR {}  average rank {}", m.name, means.join(" "), m.average_rank);
    }
    Ok(())
}

fn reference_for(set: &SolutionSet, reference: &Option<String>, factor: Option<f64>) -> CliResult<(ReferencePoint, Option<f64>)> {
    match (reference, factor) {
        (Some(text), _) => {
            let coords = parse_vector(text).map_err(CliError::Usage)?;
            if coords.len() != set.dim() {
                return Err(CliError::Invalid(format!(
                    "reference point has {} coordinates, solutions have {}",
                    coords.len(),
                    set.dim()
                )));
            }
            Ok((ReferencePoint::new(coords).map_err(usage)?, None))
        }
        (None, Some(f)) => Ok((ReferencePoint::from_factor(set, f).map_err(usage)?, Some(f))),
        (None, None) => Err(CliError::Usage("give --ref or --ref-factor".into())),
    }
}

fn run_gahss(a: GahssArgs) -> CliResult<()> {
    let dirs = read_directions(&a.dirs)?;
    let (candidates, info) = match (&a.candidates, &a.front) {
        (Some(path), _) => {
            let set = read_solution_csv(path)?;
            if !validate_nondominated(&set) {
                return Err(CliError::validation(path, "candidates must be mutually non-dominated"));
            }
            let source = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let size = set.len();
            (set, CandidateInfo { source, size, front: None, seed: None })
        }
        (None, Some(front)) => {
            let size = a.size.ok_or_else(|| CliError::Usage("--front needs --size".into()))?;
            let spec = standard_front(front, dirs.dim()).map_err(usage)?;
            let seed = resolve_seed(a.seed);
            let set = sample_front(&spec, size, &mut ChaCha8Rng::seed_from_u64(seed)).map_err(usage)?;
            (set, CandidateInfo { source: "sampled".into(), size, front: Some(front.clone()), seed: Some(seed) })
        }
        (None, None) => return Err(CliError::Usage("give --candidates or --front with --size".into())),
    };
    if candidates.dim() != dirs.dim() {
        return Err(CliError::validation(
            &a.dirs,
            format!("directions have m = {}, candidates have m = {}", dirs.dim(), candidates.dim()),
        ));
    }
    if a.k > candidates.len() {
        return Err(CliError::Usage(format!("--k {} exceeds the {} candidates", a.k, candidates.len())));
    }
    let factor = if a.reference.is_none() { Some(a.ref_factor.unwrap_or(1.2)) } else { None };
    let (reference, factor) = reference_for(&candidates, &a.reference, factor)?;
    let report = gahss(&candidates, a.k, &dirs, &reference)?;
    write_solution_csv(&a.out.join("subset.csv"), &candidates.select(&report.selected))?;
    let file = GahssReportFile {
        tool_version: TOOL_VERSION.to_string(),
        config: GahssConfig {
            k: a.k,
            reference: reference.coords().to_vec(),
            reference_factor: factor,
            candidates: info,
        },
        directions: direction_info(&a.dirs, &dirs),
        selected: report.selected,
        hypervolume: report.hypervolume,
    };
    write_json(&a.out.join("gahss.json"), &file)?;
    eprintln!("hypervolume of the selected subset: {}", fmt_f64(file.hypervolume));
    Ok(())
}

fn hv(a: HvArgs) -> CliResult<()> {
    let set = read_solution_csv(&a.set)?;
    let (reference, _) = reference_for(&set, &a.reference, a.ref_factor)?;
    println!("{}", fmt_f64(hypervolume(&set, &reference)?));
    Ok(())
}

fn hvc(a: HvcArgs) -> CliResult<()> {
    let set = read_solution_csv(&a.set)?;
    let (reference, _) = reference_for(&set, &a.reference, a.ref_factor)?;
    let (column, values) = match &a.dirs {
        Some(path) => {
            let dirs = read_directions(path)?;
            if dirs.dim() != set.dim() {
                return Err(CliError::validation(path, "direction and solution dimensions differ"));
            }
            ("r2hvc", r2hvc_all(&set, &dirs, &reference)?)
        }
        None => ("hvc", hvc_all(&set, &reference)?),
    };
    match &a.out {
        Some(path) => write_values_csv(path, column, &values)?,
        None => {
            println!("{column}");
            for v in values {
                println!("{}", fmt_f64(v));
            }
        }
    }
    Ok(())
}

fn plot(a: PlotArgs) -> CliResult<()> {
    let svg = match (&a.history, &a.cir) {
        (Some(path), _) => q_history_svg(&read_q_history(path)?),
        (None, Some(path)) => cir_svg(&read_cir_csv(path)?),
        (None, None) => return Err(CliError::Usage("give --history or --cir".into())),
    };
    if let Some(parent) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(&a.out, svg).map_err(|e| CliError::io(&a.out, e))
}
