//! `fermat`: degeneracy analysis of the Jacobian of y² = xᵐ − 1.
//!
//! Subcommands expose each pipeline stage (decomposition, projection
//! verdicts, Hodge census, torus moments, prime sweeps) plus the trace-cache
//! plumbing; `analyze` chains them into one report. Exit codes: 0 on
//! success, otherwise a distinct code per failing stage (see `error.rs`).

mod cache;
mod error;
mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use fermat_core::frobenius::CHARACTER_CONVENTION;
use fermat_core::hodge::{census, exceptional_cycles, hodge_torus};
use fermat_core::moments::{ComponentRep, SignedPermutation, TorusEmbedding};
use fermat_core::mt::projection_matrix;
use fermat_core::stickelberger::split_density;
use fermat_core::sweep::{moments_from_traces, PrimeSelector};

use cache::{ensure_split, ensure_traces, PrimeCache, SPLIT_HEADER, TRACE_HEADER};
use error::{CliError, Stage, StageExt};
use report::{
    aligned, builtin_gamma, parse_selector, rational_to_string, AnalysisConfig, HodgeDto,
    LedgerDto, NumericalDto, OddCheckDto, ProjectionDto, TorusDto,
};

#[derive(Parser)]
#[command(
    name = "fermat",
    version,
    about = "Degeneracy analysis for Jacobians of y^2 = x^m - 1",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Emit canonical JSON (the default).
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Emit an aligned text table instead of JSON.
    #[arg(long)]
    table: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and emit one degeneracy report.
    Analyze {
        #[arg(long)]
        m: u64,
        /// Sweep primes up to this bound and add numerical moments.
        #[arg(long)]
        prime_bound: Option<u64>,
        /// Prime selector: all, congruent-1-mod-m, or torsion-free.
        #[arg(long, default_value = "all")]
        selector: String,
        /// Largest moment order (even, at most 12).
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        /// Relative tolerance for even numerical moments, in percent.
        #[arg(long, default_value_t = 2.0)]
        tolerance_percent: f64,
        /// Cache directory (default: FERMAT_CACHE_DIR or ./fermat-cache).
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Isogeny decomposition of the Jacobian into Prym factors.
    Cm {
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Projection matrix and restriction verdicts (odd m).
    Mt {
        #[arg(long)]
        m: u64,
        /// Comma-separated factor labels to classify (default: every subset
        /// of size <= 2 plus the full set).
        #[arg(long, value_delimiter = ',')]
        target: Option<Vec<String>>,
        /// Include the 0/1 matrix rows in the output.
        #[arg(long)]
        with_matrix: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Hodge-ring census of exceptional classes (odd m).
    Hodge {
        #[arg(long)]
        m: u64,
        /// List the exceptional classes of one codimension.
        #[arg(long)]
        codim: Option<usize>,
        /// Include the torus parametrization.
        #[arg(long)]
        embedding: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact Sato-Tate moments of the Hodge torus.
    StMoments {
        #[arg(long)]
        m: u64,
        /// Largest moment order (at most 12).
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        /// Average over the full component group (built-in representative).
        #[arg(long)]
        with_gamma: bool,
        /// JSON file holding a signed-permutation matrix to use as the
        /// component representative.
        #[arg(long)]
        gamma_file: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Fill the trace cache for every good prime up to a bound.
    Sweep {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Numerical moments from a prime sweep (cached and resumable).
    NumMoments {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        bound: u64,
        /// Prime selector: all, congruent-1-mod-m, or torsion-free.
        #[arg(long, default_value = "all")]
        selector: String,
        /// Largest moment order (at most 12).
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Torsion-freeness of the Frobenius-root group at every split prime.
    SplitDensity {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        bound: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Merge trace or split caches into one sorted, deduplicated file.
    CacheMerge {
        /// Destination path for the merged cache.
        #[arg(long)]
        out: PathBuf,
        /// Input cache files (all the same format and modulus).
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((text, code)) => {
            print!("{text}");
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("error[{}]: {}", e.stage.label(), e.message);
            std::process::exit(e.stage.exit_code());
        }
    }
}

fn resolve_cache_dir(flag: &Option<PathBuf>) -> PathBuf {
    flag.clone().unwrap_or_else(cache::default_cache_dir)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    text
}

fn run(command: Command) -> Result<(String, i32), CliError> {
    match command {
        Command::Analyze {
            m,
            prime_bound,
            selector,
            max_n,
            tolerance_percent,
            cache_dir,
            out,
        } => {
            let dir = resolve_cache_dir(&cache_dir);
            let config = AnalysisConfig {
                m,
                prime_bound,
                max_moment: max_n,
                moment_tolerance_percent: tolerance_percent,
                cache_path: prime_bound.map(|_| dir.display().to_string()),
                selector,
            };
            let report = report::analyze(&config, &dir)?;
            let text =
                if out.table { report.render_text() } else { to_json(&report) };
            let code = report.first_failure().map_or(0, Stage::exit_code);
            Ok((text, code))
        }
        Command::Cm { m, out } => {
            let ledger = fermat_core::cm::decompose_jacobian(m).stage(Stage::Cm)?;
            let dto = LedgerDto::from_core(&ledger);
            if out.table {
                let mut rows =
                    vec![vec!["factor".to_string(), "modulus".into(), "dimension".into()]];
                for f in &dto.factors {
                    rows.push(vec![
                        f.label.clone(),
                        f.modulus.to_string(),
                        f.dimension.to_string(),
                    ]);
                }
                let header = format!(
                    "m = {}: genus {}, odd core {}, multiplicity {}\n",
                    dto.modulus, dto.genus, dto.odd_core, dto.multiplicity
                );
                Ok((format!("{header}{}", aligned(&rows)), 0))
            } else {
                Ok((to_json(&dto), 0))
            }
        }
        Command::Mt { m, target, with_matrix, out } => run_mt(m, target, with_matrix, out),
        Command::Hodge { m, codim, embedding, out } => run_hodge(m, codim, embedding, out),
        Command::StMoments { m, max_n, with_gamma, gamma_file, out } => {
            run_st_moments(m, max_n, with_gamma, gamma_file, out)
        }
        Command::Sweep { m, bound, cache_dir, out } => {
            let dir = resolve_cache_dir(&cache_dir);
            let (entries, added) = ensure_traces(m, bound, &dir)?;
            let dto = SweepOutcomeDto {
                m,
                bound,
                cache_file: cache::trace_cache_path(&dir, m).display().to_string(),
                newly_computed: added,
                entries: entries.len(),
            };
            if out.table {
                Ok((
                    format!(
                        "m = {}: {} traces up to {} ({} newly computed) in {}\n",
                        dto.m, dto.entries, dto.bound, dto.newly_computed, dto.cache_file
                    ),
                    0,
                ))
            } else {
                Ok((to_json(&dto), 0))
            }
        }
        Command::NumMoments { m, bound, selector, max_n, cache_dir, out } => {
            run_num_moments(m, bound, selector, max_n, cache_dir, out)
        }
        Command::SplitDensity { m, bound, out } => run_split_density(m, bound, out),
        Command::CacheMerge { out, inputs } => run_cache_merge(&out, &inputs),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SweepOutcomeDto {
    m: u64,
    bound: u64,
    cache_file: String,
    newly_computed: usize,
    entries: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MtDto {
    m: u64,
    rank: usize,
    rows: usize,
    cols: usize,
    row_units: Vec<u64>,
    blocks: Vec<MtBlockDto>,
    verdicts: Vec<report::VerdictDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<String>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MtBlockDto {
    label: String,
    modulus: u64,
    col_start: usize,
    characters: Vec<u64>,
}

fn run_mt(
    m: u64,
    target: Option<Vec<String>>,
    with_matrix: bool,
    out: OutputArgs,
) -> Result<(String, i32), CliError> {
    let matrix = projection_matrix(m).stage(Stage::Mt)?;
    let verdicts = match &target {
        Some(labels) => {
            let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
            let verdict = matrix.classify(&refs).stage(Stage::Mt)?;
            vec![report::verdict_to_dto(labels, &verdict)]
        }
        None => ProjectionDto::from_matrix(&matrix)?.verdicts,
    };
    let rendered_matrix = with_matrix.then(|| {
        (0..matrix.n_rows())
            .map(|r| (0..matrix.n_cols()).map(|c| char::from(b'0' + matrix.entry(r, c))).collect())
            .collect::<Vec<String>>()
    });
    let dto = MtDto {
        m,
        rank: matrix.rank(),
        rows: matrix.n_rows(),
        cols: matrix.n_cols(),
        row_units: matrix.row_units().to_vec(),
        blocks: matrix
            .blocks()
            .iter()
            .map(|b| MtBlockDto {
                label: b.label.clone(),
                modulus: b.modulus,
                col_start: b.col_start,
                characters: b.characters.clone(),
            })
            .collect(),
        verdicts,
        matrix: rendered_matrix,
    };
    if out.table {
        let mut text = format!("m = {}: projection matrix {} x {}, rank {}\n", m, dto.rows, dto.cols, dto.rank);
        let mut rows = vec![vec!["targets".to_string(), "verdict".into()]];
        for v in &dto.verdicts {
            let verdict = match &v.isogeny_index {
                Some(ix) => format!("{}({})", v.verdict, ix),
                None => v.verdict.clone(),
            };
            rows.push(vec![v.targets.join(","), verdict]);
        }
        text.push_str(&aligned(&rows));
        if let Some(matrix_rows) = &dto.matrix {
            text.push('\n');
            for (unit, bits) in dto.row_units.iter().zip(matrix_rows) {
                text.push_str(&format!("{unit:>4}  {bits}\n"));
            }
        }
        Ok((text, 0))
    } else {
        Ok((to_json(&dto), 0))
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct HodgeOutDto {
    m: u64,
    #[serde(flatten)]
    census: HodgeDto,
    #[serde(skip_serializing_if = "Option::is_none")]
    cycles: Option<CyclesDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    embedding: Option<TorusDto>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CyclesDto {
    codim: usize,
    exceptional: Vec<[Vec<u16>; 2]>,
}

fn run_hodge(
    m: u64,
    codim: Option<usize>,
    embedding: bool,
    out: OutputArgs,
) -> Result<(String, i32), CliError> {
    let cen = census(m).stage(Stage::Hodge)?;
    let census_dto = HodgeDto::from_census(&cen);
    let cycles = match codim {
        Some(d) => {
            let pairs = exceptional_cycles(m, d).stage(Stage::Hodge)?;
            Some(CyclesDto {
                codim: d,
                exceptional: pairs.into_iter().map(|p| [p.left, p.right]).collect(),
            })
        }
        None => None,
    };
    let torus = if embedding {
        Some(TorusDto::from_torus(&hodge_torus(m).stage(Stage::Hodge)?))
    } else {
        None
    };
    let dto = HodgeOutDto { m, census: census_dto, cycles, embedding: torus };
    if out.table {
        let mut text = format!("m = {}: genus {}\n", m, dto.census.genus);
        let mut rows = vec![vec![
            "codim".to_string(),
            "hodge".into(),
            "exceptional".into(),
            "indecomposable".into(),
        ]];
        for c in &dto.census.per_codim {
            rows.push(vec![
                c.codim.to_string(),
                c.hodge_dimension.to_string(),
                c.exceptional.to_string(),
                c.indecomposable.to_string(),
            ]);
        }
        text.push_str(&aligned(&rows));
        text.push_str(&format!(
            "degenerate: {} ({} exceptional classes)\n",
            if dto.census.degenerate { "yes" } else { "no" },
            dto.census.total_exceptional
        ));
        if let Some(cycles) = &dto.cycles {
            text.push_str(&format!("\nexceptional classes at codimension {}\n", cycles.codim));
            for [left, right] in &cycles.exceptional {
                let fmt = |v: &[u16]| {
                    v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
                };
                text.push_str(&format!("  ({} | {})\n", fmt(left), fmt(right)));
            }
        }
        if let Some(torus) = &dto.embedding {
            text.push_str(&format!(
                "\ntorus: free rank {} ({}), free coordinates {}\n",
                torus.free_rank,
                torus.style,
                torus.free_indices.iter().map(|i| format!("U{i}")).collect::<Vec<_>>().join(", ")
            ));
        }
        Ok((text, 0))
    } else {
        Ok((to_json(&dto), 0))
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct StMomentsDto {
    m: u64,
    max_n: usize,
    identity: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    full_group: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    component_count: Option<usize>,
}

fn signed_permutation_from_matrix(rows: &[Vec<i64>]) -> Result<SignedPermutation, CliError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(CliError::config("gamma matrix must be square"));
    }
    let mut perm = vec![usize::MAX; n];
    let mut sign = vec![0i64; n];
    for j in 0..n {
        for (i, row) in rows.iter().enumerate() {
            match row[j] {
                0 => {}
                1 | -1 => {
                    if perm[j] != usize::MAX {
                        return Err(CliError::config(format!(
                            "gamma matrix column {j} has more than one nonzero entry"
                        )));
                    }
                    perm[j] = i;
                    sign[j] = row[j];
                }
                other => {
                    return Err(CliError::config(format!(
                        "gamma matrix entries must be -1, 0, or 1; found {other}"
                    )));
                }
            }
        }
        if perm[j] == usize::MAX {
            return Err(CliError::config(format!("gamma matrix column {j} is zero")));
        }
    }
    SignedPermutation::new(perm, sign).stage(Stage::Config)
}

fn run_st_moments(
    m: u64,
    max_n: usize,
    with_gamma: bool,
    gamma_file: Option<PathBuf>,
    out: OutputArgs,
) -> Result<(String, i32), CliError> {
    if max_n == 0 || max_n > 12 {
        return Err(CliError::config(format!("max-n must be between 1 and 12, got {max_n}")));
    }
    let ledger = fermat_core::cm::decompose_jacobian(m).stage(Stage::Cm)?;
    let torus = hodge_torus(ledger.odd_core).stage(Stage::Hodge)?;
    let embedding = TorusEmbedding::from_torus(&torus, ledger.multiplicity);
    let identity = embedding.moments(max_n).stage(Stage::Moments)?;

    let gamma = match (&gamma_file, with_gamma) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
            let rows: Vec<Vec<i64>> = serde_json::from_str(&text)
                .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
            Some(signed_permutation_from_matrix(&rows)?)
        }
        (None, true) => Some(builtin_gamma(ledger.odd_core, ledger.multiplicity).ok_or_else(
            || {
                CliError::config(format!(
                    "no built-in component representative for odd core {}; pass --gamma-file",
                    ledger.odd_core
                ))
            },
        )?),
        (None, false) => None,
    };

    let (full_group, component_count) = match gamma {
        Some(gamma) => {
            let rep = ComponentRep::new(embedding, gamma).stage(Stage::Moments)?;
            let moments = rep.group_moments(max_n).stage(Stage::Moments)?;
            (Some(moments.iter().map(rational_to_string).collect::<Vec<_>>()), Some(rep.component_count()))
        }
        None => (None, None),
    };

    let dto = StMomentsDto {
        m,
        max_n,
        identity: identity.iter().map(|x| x.to_string()).collect(),
        full_group,
        component_count,
    };
    if out.table {
        let mut rows = vec![std::iter::once("n".to_string())
            .chain((1..=max_n).map(|n| n.to_string()))
            .collect::<Vec<_>>()];
        rows.push(std::iter::once("identity".to_string()).chain(dto.identity.clone()).collect());
        if let Some(fg) = &dto.full_group {
            rows.push(std::iter::once("full group".to_string()).chain(fg.clone()).collect());
        }
        Ok((format!("exact moments for m = {m}\n{}", aligned(&rows)), 0))
    } else {
        Ok((to_json(&dto), 0))
    }
}

fn run_num_moments(
    m: u64,
    bound: u64,
    selector_label: String,
    max_n: usize,
    cache_dir: Option<PathBuf>,
    out: OutputArgs,
) -> Result<(String, i32), CliError> {
    let selector = parse_selector(&selector_label)?;
    let dir = resolve_cache_dir(&cache_dir);
    let (traces, _) = ensure_traces(m, bound, &dir)?;
    let torsion = match selector {
        PrimeSelector::TorsionFree => ensure_split(m, bound, &dir)?.0,
        _ => BTreeMap::new(),
    };
    let numerical = moments_from_traces(m, bound, selector, max_n, &traces, &torsion)
        .stage(Stage::Frobenius)?;
    let mut odd_checks = Vec::new();
    for n in (1..=numerical.max_moment).step_by(2) {
        if let Some(band) = numerical.odd_moment_band(n) {
            let observed = numerical.moments[n - 1];
            odd_checks.push(OddCheckDto { order: n, band, observed, within: observed.abs() <= band });
        }
    }
    let dto = NumericalDto {
        selector: selector.label().into(),
        prime_bound: bound,
        prime_count: numerical.count,
        max_n: numerical.max_moment,
        moments: numerical.moments.clone(),
        exact_power_sums: numerical.exact_power_sums.iter().map(|x| x.to_string()).collect(),
        baseline: "none".into(),
        even_checks: Vec::new(),
        odd_checks,
        character_convention: CHARACTER_CONVENTION.into(),
    };
    if out.table {
        let mut rows = vec![std::iter::once("n".to_string())
            .chain((1..=dto.max_n).map(|n| n.to_string()))
            .collect::<Vec<_>>()];
        rows.push(
            std::iter::once("observed".to_string())
                .chain(dto.moments.iter().map(|x| format!("{x:.5}")))
                .collect(),
        );
        Ok((
            format!(
                "numerical moments for m = {m}, selector {}, p <= {} ({} primes)\n{}",
                dto.selector,
                bound,
                dto.prime_count,
                aligned(&rows)
            ),
            0,
        ))
    } else {
        Ok((to_json(&dto), 0))
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SplitResultDto {
    p: u64,
    torsion_free: bool,
    relation_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_relation: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_root: Option<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SplitDensityDto {
    m: u64,
    bound: u64,
    total: usize,
    torsion_free: usize,
    fraction: f64,
    results: Vec<SplitResultDto>,
}

fn render_root(negative: bool, k: u64) -> String {
    match (negative, k) {
        (false, 0) => "1".into(),
        (true, 0) => "-1".into(),
        (false, _) => format!("zeta^{k}"),
        (true, _) => format!("-zeta^{k}"),
    }
}

fn run_split_density(m: u64, bound: u64, out: OutputArgs) -> Result<(String, i32), CliError> {
    let density = split_density(m, bound).stage(Stage::Frobenius)?;
    let dto = SplitDensityDto {
        m,
        bound,
        total: density.total(),
        torsion_free: density.torsion_free_count(),
        fraction: density.fraction(),
        results: density
            .results
            .iter()
            .map(|r| SplitResultDto {
                p: r.p,
                torsion_free: r.torsion_free,
                relation_rank: r.relation_rank,
                witness_relation: r.witness_relation.clone(),
                witness_root: r.witness_root.map(|(neg, k)| render_root(neg, k)),
            })
            .collect(),
    };
    if out.table {
        let mut text = format!(
            "split density for m = {m}, p <= {bound}: {}/{} torsion-free (fraction {:.4})\n",
            dto.torsion_free, dto.total, dto.fraction
        );
        let mut rows =
            vec![vec!["p".to_string(), "torsion-free".into(), "rank".into(), "witness".into()]];
        for r in &dto.results {
            rows.push(vec![
                r.p.to_string(),
                if r.torsion_free { "yes".into() } else { "no".into() },
                r.relation_rank.to_string(),
                r.witness_root.clone().unwrap_or_else(|| "-".into()),
            ]);
        }
        text.push_str(&aligned(&rows));
        Ok((text, 0))
    } else {
        Ok((to_json(&dto), 0))
    }
}

fn sniff_header(path: &Path) -> Result<&'static str, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::cache(format!("cannot read {}: {e}", path.display())))?;
    let first = text.lines().next().unwrap_or("");
    if first.starts_with(TRACE_HEADER) {
        Ok(TRACE_HEADER)
    } else if first.starts_with(SPLIT_HEADER) {
        Ok(SPLIT_HEADER)
    } else {
        Err(CliError::cache(format!(
            "FORMAT_MISMATCH: {}: unrecognized header {first:?}",
            path.display()
        )))
    }
}

fn merge_caches<V: cache::CacheValue>(
    out_path: &Path,
    inputs: &[PathBuf],
) -> Result<(String, i32), CliError> {
    let mut merged: Option<PrimeCache<V>> = None;
    for path in inputs {
        let cache = PrimeCache::<V>::read(path)?;
        match &mut merged {
            None => merged = Some(cache),
            Some(acc) => acc.merge(&cache, &path.display().to_string())?,
        }
    }
    let merged = merged.expect("at least one input enforced by clap");
    merged.write(out_path)?;
    Ok((
        format!(
            "merged {} files into {} ({} entries, m = {})\n",
            inputs.len(),
            out_path.display(),
            merged.entries.len(),
            merged.m
        ),
        0,
    ))
}

fn run_cache_merge(out_path: &Path, inputs: &[PathBuf]) -> Result<(String, i32), CliError> {
    let kind = sniff_header(&inputs[0])?;
    for path in &inputs[1..] {
        if sniff_header(path)? != kind {
            return Err(CliError::cache(format!(
                "FORMAT_MISMATCH: {} is not a {kind} cache",
                path.display()
            )));
        }
    }
    if kind == TRACE_HEADER {
        merge_caches::<i64>(out_path, inputs)
    } else {
        merge_caches::<bool>(out_path, inputs)
    }
}
