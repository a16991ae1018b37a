//! Analysis configuration and the degeneracy report: one machine-readable
//! document per modulus aggregating the isogeny decomposition, projection
//! verdicts, Hodge census, torus parametrization, exact moments, and (when a
//! prime bound is given) numerical sweep statistics.
//!
//! The JSON key order is pinned by struct declaration order and all exact
//! values are emitted as decimal strings, so a fixed configuration yields a
//! byte-identical document.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use fermat_core::cm::DecompositionLedger;
use fermat_core::frobenius::CHARACTER_CONVENTION;
use fermat_core::hodge::{census, hodge_torus, HodgeTorus, ParametrizationStyle};
use fermat_core::moments::{gamma_j9, ComponentRep, SignedPermutation, TorusEmbedding};
use fermat_core::mt::{projection_matrix, MtMatrix, ProjectionVerdict};
use fermat_core::sweep::{moments_from_traces, PrimeSelector};

use crate::cache::{ensure_split, ensure_traces};
use crate::error::{CliError, Stage, StageExt};

pub const FORMAT_VERSION: u32 = 1;

/// What `analyze` was asked to do.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisConfig {
    pub m: u64,
    pub prime_bound: Option<u64>,
    pub max_moment: usize,
    pub moment_tolerance_percent: f64,
    pub cache_path: Option<String>,
    pub selector: String,
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.m < 3 {
            return Err(CliError::config(format!("m must be at least 3, got {}", self.m)));
        }
        if let Some(bound) = self.prime_bound {
            if bound < 100 {
                return Err(CliError::config(format!(
                    "prime bound must be at least 100, got {bound}"
                )));
            }
        }
        if self.max_moment == 0 || self.max_moment % 2 != 0 || self.max_moment > 12 {
            return Err(CliError::config(format!(
                "max moment must be even and between 2 and 12, got {}",
                self.max_moment
            )));
        }
        if !(self.moment_tolerance_percent > 0.0) {
            return Err(CliError::config(format!(
                "moment tolerance must be positive, got {}",
                self.moment_tolerance_percent
            )));
        }
        parse_selector(&self.selector)?;
        Ok(())
    }
}

pub fn parse_selector(label: &str) -> Result<PrimeSelector, CliError> {
    match label {
        "all" => Ok(PrimeSelector::All),
        "congruent-1-mod-m" => Ok(PrimeSelector::CongruentOneModM),
        "torsion-free" => Ok(PrimeSelector::TorsionFree),
        other => Err(CliError::config(format!(
            "unknown selector {other:?}; expected all, congruent-1-mod-m, or torsion-free"
        ))),
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FactorDto {
    pub label: String,
    pub modulus: u64,
    pub dimension: u64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LedgerDto {
    pub modulus: u64,
    pub odd_core: u64,
    pub multiplicity: u32,
    pub genus: u64,
    pub factors: Vec<FactorDto>,
}

impl LedgerDto {
    pub fn from_core(ledger: &DecompositionLedger) -> Self {
        LedgerDto {
            modulus: ledger.modulus,
            odd_core: ledger.odd_core,
            multiplicity: ledger.multiplicity,
            genus: ledger.genus,
            factors: ledger
                .factors
                .iter()
                .map(|f| FactorDto {
                    label: f.label.clone(),
                    modulus: f.modulus,
                    dimension: f.dimension,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerdictDto {
    pub targets: Vec<String>,
    pub verdict: String,
    /// Present exactly when the verdict is ISOGENY.
    pub isogeny_index: Option<String>,
}

pub fn verdict_to_dto(targets: &[String], verdict: &ProjectionVerdict) -> VerdictDto {
    let (name, index) = match verdict {
        ProjectionVerdict::Isomorphism => ("ISOMORPHISM", None),
        ProjectionVerdict::Isogeny { index } => ("ISOGENY", Some(index.to_string())),
        ProjectionVerdict::Neither => ("NEITHER", None),
    };
    VerdictDto { targets: targets.to_vec(), verdict: name.into(), isogeny_index: index }
}

/// Every factor subset of size 1 or 2, plus the full set.
pub fn verdict_family(labels: &[String]) -> Vec<Vec<String>> {
    let n = labels.len();
    let mut sets = Vec::new();
    for i in 0..n {
        sets.push(vec![labels[i].clone()]);
    }
    for i in 0..n {
        for j in i + 1..n {
            sets.push(vec![labels[i].clone(), labels[j].clone()]);
        }
    }
    if n > 2 {
        sets.push(labels.to_vec());
    }
    sets
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProjectionDto {
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    pub verdicts: Vec<VerdictDto>,
}

impl ProjectionDto {
    pub fn from_matrix(matrix: &MtMatrix) -> Result<Self, CliError> {
        let labels: Vec<String> =
            matrix.ledger().factors.iter().map(|f| f.label.clone()).collect();
        let mut verdicts = Vec::new();
        for targets in verdict_family(&labels) {
            let refs: Vec<&str> = targets.iter().map(String::as_str).collect();
            let verdict = matrix.classify(&refs).stage(Stage::Mt)?;
            verdicts.push(verdict_to_dto(&targets, &verdict));
        }
        Ok(ProjectionDto {
            rank: matrix.rank(),
            rows: matrix.n_rows(),
            cols: matrix.n_cols(),
            verdicts,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CodimDto {
    pub codim: usize,
    pub hodge_dimension: u64,
    pub exceptional: u64,
    pub indecomposable: u64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HodgeDto {
    pub genus: usize,
    pub per_codim: Vec<CodimDto>,
    pub total_exceptional: u64,
    pub degenerate: bool,
    /// Indecomposable classes as 1-based index-set pairs `[left, right]`.
    pub indecomposable_pairs: Vec<[Vec<u16>; 2]>,
}

pub fn mask_to_indices(mask: u64) -> Vec<u16> {
    (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i as u16 + 1).collect()
}

impl HodgeDto {
    pub fn from_census(cen: &fermat_core::hodge::HodgeCensus) -> Self {
        HodgeDto {
            genus: cen.genus(),
            per_codim: cen
                .per_codim()
                .iter()
                .map(|c| CodimDto {
                    codim: c.codim,
                    hodge_dimension: c.hodge_dimension,
                    exceptional: c.exceptional,
                    indecomposable: c.indecomposable,
                })
                .collect(),
            total_exceptional: cen.total_exceptional(),
            degenerate: cen.is_degenerate(),
            indecomposable_pairs: cen
                .indecomposable_pairs()
                .iter()
                .map(|&(a, b)| [mask_to_indices(a), mask_to_indices(b)])
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TorusDto {
    pub free_rank: usize,
    pub style: String,
    /// 1-based coordinates serving as free parameters.
    pub free_indices: Vec<usize>,
    /// genus × freeRank exponent matrix: row i writes U_{i+1} as a monomial
    /// in the free parameters.
    pub exponents: Vec<Vec<i64>>,
    /// Basis of the relation lattice (rows), in Hermite normal form.
    pub relation_basis: Vec<Vec<String>>,
}

impl TorusDto {
    pub fn from_torus(torus: &HodgeTorus) -> Self {
        let exponents = (0..torus.genus())
            .map(|i| {
                torus
                    .exponents()
                    .row(i)
                    .iter()
                    .map(|x| i64::try_from(x).expect("torus exponent fits i64"))
                    .collect()
            })
            .collect();
        let basis_matrix = torus.relation_lattice().basis();
        let basis = (0..basis_matrix.rows())
            .map(|r| basis_matrix.row(r).iter().map(|x| x.to_string()).collect())
            .collect();
        TorusDto {
            free_rank: torus.free_rank(),
            style: match torus.style() {
                ParametrizationStyle::BackSubstitution => "back-substitution".into(),
                ParametrizationStyle::General => "general".into(),
            },
            free_indices: torus.free_indices().to_vec(),
            exponents,
            relation_basis: basis,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExactMomentsDto {
    /// Order actually computed (the configured maximum, capped by free rank).
    pub max_n: usize,
    /// Identity-component moments M_1..M_maxN, exact integers.
    pub identity: Vec<String>,
    /// Full-group moments when a component representative is built in.
    pub full_group: Option<Vec<String>>,
    pub component_count: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EvenCheckDto {
    pub order: usize,
    pub reference: f64,
    pub observed: f64,
    pub deviation_percent: f64,
    pub tolerance_percent: f64,
    pub within: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OddCheckDto {
    pub order: usize,
    pub band: f64,
    pub observed: f64,
    pub within: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NumericalDto {
    pub selector: String,
    pub prime_bound: u64,
    pub prime_count: u64,
    pub max_n: usize,
    /// M_1..M_maxN as floats (range-merged, bit-reproducible).
    pub moments: Vec<f64>,
    /// Exact integer power sums of the raw traces, same indexing.
    pub exact_power_sums: Vec<String>,
    /// Which exact moment table the even orders are compared against.
    pub baseline: String,
    pub even_checks: Vec<EvenCheckDto>,
    pub odd_checks: Vec<OddCheckDto>,
    pub character_convention: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SplitSummaryDto {
    pub bound: u64,
    pub total: usize,
    pub torsion_free: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConsistencyDto {
    pub name: String,
    pub module: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DegeneracyReport {
    pub format_version: u32,
    pub config: AnalysisConfig,
    pub ledger: LedgerDto,
    pub projection: ProjectionDto,
    pub hodge: HodgeDto,
    pub torus: TorusDto,
    pub exact_moments: ExactMomentsDto,
    pub numerical_moments: Option<NumericalDto>,
    pub split_density: Option<SplitSummaryDto>,
    pub consistency: Vec<ConsistencyDto>,
    #[serde(skip)]
    stages: Vec<Stage>,
}

impl DegeneracyReport {
    /// Stage of the first failed consistency check, for the exit code.
    pub fn first_failure(&self) -> Option<Stage> {
        self.consistency
            .iter()
            .zip(&self.stages)
            .find(|(c, _)| !c.passed)
            .map(|(_, &stage)| stage)
    }
}

/// Exact-moment order cap by free rank: Laurent powers in many variables
/// grow too fast for the full order 12.
pub fn rank_capped_max_n(free_rank: usize, configured: usize) -> usize {
    let cap = match free_rank {
        0..=4 => 12,
        5 | 6 => 8,
        7..=9 => 6,
        _ => 4,
    };
    configured.min(cap)
}

/// The built-in component representative for the odd-core-9 family, expanded
/// to `copies` isogenous copies of the embedding.
pub fn builtin_gamma(odd_core: u64, copies: u32) -> Option<SignedPermutation> {
    if odd_core != 9 {
        return None;
    }
    let gamma = gamma_j9();
    if copies == 1 {
        return Some(gamma);
    }
    let n = gamma.dim();
    let mut perm = Vec::with_capacity(n * copies as usize);
    let mut sign = Vec::with_capacity(n * copies as usize);
    for c in 0..copies as usize {
        for j in 0..n {
            perm.push(c * n + gamma.image_of(j));
            sign.push(gamma.sign_of(j));
        }
    }
    Some(SignedPermutation::new(perm, sign).expect("block doubling preserves the permutation"))
}

pub fn rational_to_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn bigint_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn rational_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

struct ConsistencyLog {
    entries: Vec<ConsistencyDto>,
    stages: Vec<Stage>,
}

impl ConsistencyLog {
    fn new() -> Self {
        ConsistencyLog { entries: Vec::new(), stages: Vec::new() }
    }

    fn push(&mut self, stage: Stage, name: &str, passed: bool, detail: String) {
        self.entries.push(ConsistencyDto {
            name: name.into(),
            module: stage.label().into(),
            passed,
            detail,
        });
        self.stages.push(stage);
    }
}

fn is_composite(n: u64) -> bool {
    n >= 4 && !fermat_core::ff::is_prime(n)
}

/// Identity-component (and, where available, full-group) exact moments.
fn exact_moments_section(
    torus: &HodgeTorus,
    multiplicity: u32,
    configured_max: usize,
    log: &mut ConsistencyLog,
) -> Result<(ExactMomentsDto, Vec<BigInt>, Option<Vec<BigRational>>), CliError> {
    let max_n = rank_capped_max_n(torus.free_rank(), configured_max);
    let embedding = TorusEmbedding::from_torus(torus, multiplicity);
    let identity = embedding.moments(max_n).stage(Stage::Moments)?;

    let mut full_group = None;
    let mut component_count = None;
    if let Some(gamma) = builtin_gamma(torus.modulus(), multiplicity) {
        let rep = ComponentRep::new(embedding.clone(), gamma).stage(Stage::Moments)?;
        component_count = Some(rep.component_count());
        full_group = Some(rep.group_moments(max_n).stage(Stage::Moments)?);
    }

    // The embedding must span the symplectic space of the whole Jacobian.
    let genus_2g = 2 * torus.genus() * multiplicity as usize;
    log.push(
        Stage::Moments,
        "embedding-dimension",
        embedding.dimension() == genus_2g,
        format!("torus embeds in USp({}), Jacobian needs USp({})", embedding.dimension(), genus_2g),
    );

    let dto = ExactMomentsDto {
        max_n,
        identity: identity.iter().map(|x| x.to_string()).collect(),
        full_group: full_group
            .as_ref()
            .map(|v| v.iter().map(rational_to_string).collect()),
        component_count,
    };
    Ok((dto, identity, full_group))
}

/// Known exact even-moment prefixes, used as embedded fixtures.
fn moment_fixture(odd_core: u64, multiplicity: u32, full_group: bool) -> Option<&'static [i64]> {
    match (odd_core, multiplicity, full_group) {
        (9, 1, false) => Some(&[8, 216, 8000, 343000, 16003008, 788889024]),
        (9, 1, true) => Some(&[2, 38, 1340, 57190, 2667252, 131481812]),
        (9, 2, false) => Some(&[32, 3456, 512000, 87808000, 16387080192, 3231289442304]),
        (15, 1, false) => Some(&[14, 834, 78260]),
        _ => None,
    }
}

fn check_moment_fixture(
    name: &str,
    label: &str,
    evens: &[BigInt],
    fixture: &[i64],
    log: &mut ConsistencyLog,
) {
    let n = evens.len().min(fixture.len());
    let ok = (0..n).all(|i| evens[i] == BigInt::from(fixture[i]));
    let detail = if ok {
        format!("{label} M_2..M_{} match the expected exact values", 2 * n)
    } else {
        format!(
            "{label} mismatch: got [{}], expected [{}]",
            evens[..n].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "),
            fixture[..n].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        )
    };
    log.push(Stage::Moments, name, ok, detail);
}

fn even_entries(moments: &[BigInt]) -> Vec<BigInt> {
    moments.iter().skip(1).step_by(2).cloned().collect()
}

fn numerical_section(
    config: &AnalysisConfig,
    bound: u64,
    cache_dir: &Path,
    identity: &[BigInt],
    full_group: Option<&[BigRational]>,
    log: &mut ConsistencyLog,
) -> Result<(NumericalDto, Option<SplitSummaryDto>), CliError> {
    let selector = parse_selector(&config.selector)?;
    let m = config.m;
    let (traces, _) = ensure_traces(m, bound, cache_dir)?;
    let torsion = match selector {
        PrimeSelector::TorsionFree => ensure_split(m, bound, cache_dir)?.0,
        _ => BTreeMap::new(),
    };
    let numerical =
        moments_from_traces(m, bound, selector, config.max_moment, &traces, &torsion)
            .stage(Stage::Frobenius)?;

    let (baseline, reference): (&str, Option<Vec<f64>>) = match selector {
        PrimeSelector::All => match full_group {
            Some(fg) => ("full-group", Some(fg.iter().map(rational_f64).collect())),
            None => ("none", None),
        },
        PrimeSelector::CongruentOneModM => {
            ("identity-component", Some(identity.iter().map(bigint_f64).collect()))
        }
        PrimeSelector::TorsionFree => {
            ("identity-component", Some(identity.iter().map(bigint_f64).collect()))
        }
    };

    let mut even_checks = Vec::new();
    let mut odd_checks = Vec::new();
    if let Some(reference) = &reference {
        let checkable = numerical.max_moment.min(reference.len());
        for n in (2..=checkable).step_by(2) {
            let reference = reference[n - 1];
            let observed = numerical.moments[n - 1];
            let deviation_percent = if reference != 0.0 {
                (observed - reference).abs() / reference.abs() * 100.0
            } else {
                f64::INFINITY
            };
            even_checks.push(EvenCheckDto {
                order: n,
                reference,
                observed,
                deviation_percent,
                tolerance_percent: config.moment_tolerance_percent,
                within: deviation_percent <= config.moment_tolerance_percent,
            });
        }
    }
    for n in (1..=numerical.max_moment).step_by(2) {
        if let Some(band) = numerical.odd_moment_band(n) {
            let observed = numerical.moments[n - 1];
            odd_checks.push(OddCheckDto { order: n, band, observed, within: observed.abs() <= band });
        }
    }

    if !even_checks.is_empty() {
        let all_within = even_checks.iter().all(|c| c.within);
        let worst = even_checks
            .iter()
            .max_by(|a, b| a.deviation_percent.total_cmp(&b.deviation_percent))
            .expect("nonempty");
        log.push(
            Stage::Moments,
            "numerical-even-moments-within-tolerance",
            all_within,
            format!(
                "worst even deviation {:.3}% at M_{} (tolerance {}%)",
                worst.deviation_percent, worst.order, config.moment_tolerance_percent
            ),
        );
    }
    if !odd_checks.is_empty() {
        let all_within = odd_checks.iter().all(|c| c.within);
        log.push(
            Stage::Moments,
            "numerical-odd-moments-near-zero",
            all_within,
            format!("{} odd orders checked against their error bands", odd_checks.len()),
        );
    }

    let split = match selector {
        PrimeSelector::TorsionFree => {
            let total = torsion.len();
            let free = torsion.values().filter(|&&v| v).count();
            Some(SplitSummaryDto {
                bound,
                total,
                torsion_free: free,
                fraction: if total == 0 { 0.0 } else { free as f64 / total as f64 },
            })
        }
        _ => None,
    };

    let dto = NumericalDto {
        selector: selector.label().into(),
        prime_bound: bound,
        prime_count: numerical.count,
        max_n: numerical.max_moment,
        moments: numerical.moments.clone(),
        exact_power_sums: numerical.exact_power_sums.iter().map(|x| x.to_string()).collect(),
        baseline: baseline.into(),
        even_checks,
        odd_checks,
        character_convention: CHARACTER_CONVENTION.into(),
    };
    Ok((dto, split))
}

/// Run the full pipeline for one configuration.
pub fn analyze(config: &AnalysisConfig, cache_dir: &Path) -> Result<DegeneracyReport, CliError> {
    config.validate()?;
    let mut log = ConsistencyLog::new();

    // cm-structure
    let ledger = fermat_core::cm::decompose_jacobian(config.m).stage(Stage::Cm)?;
    log.push(
        Stage::Cm,
        "ledger-dimension",
        ledger.total_dimension() == ledger.genus,
        format!("factor dimensions sum to {}, genus is {}", ledger.total_dimension(), ledger.genus),
    );

    // mt-projection (on the odd core; isogenous copies share the MT torus)
    let matrix = projection_matrix(ledger.odd_core).stage(Stage::Mt)?;
    let projection = ProjectionDto::from_matrix(&matrix)?;

    // hodge-analysis
    let cen = census(ledger.odd_core).stage(Stage::Hodge)?;
    let hodge = HodgeDto::from_census(&cen);
    if is_composite(ledger.odd_core) {
        log.push(
            Stage::Hodge,
            "exceptional-census-nonempty",
            cen.total_exceptional() > 0,
            format!("{} exceptional classes for composite odd core", cen.total_exceptional()),
        );
    }
    let torus = hodge_torus(ledger.odd_core).stage(Stage::Hodge)?;
    log.push(
        Stage::Hodge,
        "torus-fixes-exactly-the-hodge-classes",
        torus.fixes_exactly_the_hodge_classes().stage(Stage::Hodge)?,
        "monomials fixed by the torus coincide with the Hodge classes in every codimension"
            .into(),
    );
    log.push(
        Stage::Hodge,
        "free-rank-plus-one-equals-mt-rank",
        torus.free_rank() + 1 == matrix.rank(),
        format!("free rank {} + 1 vs projection rank {}", torus.free_rank(), matrix.rank()),
    );
    let torus_dto = TorusDto::from_torus(&torus);

    // sato-tate-moments
    let (exact, identity, full_group) =
        exact_moments_section(&torus, ledger.multiplicity, config.max_moment, &mut log)?;
    let identity_evens = even_entries(&identity);
    if let Some(fixture) = moment_fixture(ledger.odd_core, ledger.multiplicity, false) {
        check_moment_fixture(
            "identity-moments-fixture",
            "identity-component moments",
            &identity_evens,
            fixture,
            &mut log,
        );
    }
    if let Some(fg) = &full_group {
        if let Some(fixture) = moment_fixture(ledger.odd_core, ledger.multiplicity, true) {
            let evens: Vec<BigRational> = fg.iter().skip(1).step_by(2).cloned().collect();
            let n = evens.len().min(fixture.len());
            let ok = (0..n).all(|i| evens[i] == BigRational::from_integer(fixture[i].into()));
            let detail = if ok {
                format!("full-group M_2..M_{} match the expected exact values", 2 * n)
            } else {
                format!(
                    "full-group mismatch: got [{}], expected [{}]",
                    evens[..n].iter().map(rational_to_string).collect::<Vec<_>>().join(", "),
                    fixture[..n].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
                )
            };
            log.push(Stage::Moments, "full-group-moments-fixture", ok, detail);
        }
    }

    // frobenius-arithmetic (optional numerical stage)
    let mut numerical = None;
    let mut split = None;
    if let Some(bound) = config.prime_bound {
        let (dto, split_dto) = numerical_section(
            config,
            bound,
            cache_dir,
            &identity,
            full_group.as_deref(),
            &mut log,
        )?;
        numerical = Some(dto);
        split = split_dto;
    }

    Ok(DegeneracyReport {
        format_version: FORMAT_VERSION,
        config: config.clone(),
        ledger: LedgerDto::from_core(&ledger),
        projection,
        hodge,
        torus: torus_dto,
        exact_moments: exact,
        numerical_moments: numerical,
        split_density: split,
        consistency: log.entries,
        stages: log.stages,
    })
}

// ---------------------------------------------------------------- rendering

/// Left-align the first column, right-align the rest, two-space gutters.
pub fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i == 0 {
                line.push_str(&format!("{:<width$}", cell, width = widths[0]));
            } else {
                line.push_str(&format!("  {:>width$}", cell, width = widths[i]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn moment_table(title: &str, max_n: usize, rows: Vec<(String, Vec<String>)>) -> String {
    let mut table = vec![std::iter::once("n".to_string())
        .chain((1..=max_n).map(|n| n.to_string()))
        .collect::<Vec<_>>()];
    for (label, values) in rows {
        table.push(std::iter::once(label).chain(values).collect());
    }
    format!("{title}\n{}", aligned(&table))
}

impl DegeneracyReport {
    /// The aligned text form mirroring the report sections.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let ledger = &self.ledger;
        out.push_str(&format!(
            "degeneracy report (format {}) for m = {}\n",
            self.format_version, self.config.m
        ));
        out.push_str(&format!(
            "genus {}; odd core {} with multiplicity {}\n\n",
            ledger.genus, ledger.odd_core, ledger.multiplicity
        ));

        let mut rows = vec![vec!["factor".into(), "modulus".into(), "dimension".into()]];
        for f in &ledger.factors {
            rows.push(vec![f.label.clone(), f.modulus.to_string(), f.dimension.to_string()]);
        }
        out.push_str(&aligned(&rows));
        out.push('\n');

        out.push_str(&format!(
            "projection matrix: {} x {}, rank {}\n",
            self.projection.rows, self.projection.cols, self.projection.rank
        ));
        let mut rows = vec![vec!["targets".into(), "verdict".into()]];
        for v in &self.projection.verdicts {
            let verdict = match &v.isogeny_index {
                Some(ix) => format!("{}({})", v.verdict, ix),
                None => v.verdict.clone(),
            };
            rows.push(vec![v.targets.join(","), verdict]);
        }
        out.push_str(&aligned(&rows));
        out.push('\n');

        out.push_str("hodge census\n");
        let mut rows =
            vec![vec!["codim".into(), "hodge".into(), "exceptional".into(), "indecomposable".into()]];
        for c in &self.hodge.per_codim {
            rows.push(vec![
                c.codim.to_string(),
                c.hodge_dimension.to_string(),
                c.exceptional.to_string(),
                c.indecomposable.to_string(),
            ]);
        }
        out.push_str(&aligned(&rows));
        out.push_str(&format!(
            "degenerate: {} ({} exceptional classes)\n\n",
            if self.hodge.degenerate { "yes" } else { "no" },
            self.hodge.total_exceptional
        ));

        out.push_str(&format!(
            "torus: free rank {} ({}), free coordinates {}\n\n",
            self.torus.free_rank,
            self.torus.style,
            self.torus
                .free_indices
                .iter()
                .map(|i| format!("U{i}"))
                .collect::<Vec<_>>()
                .join(", ")
        ));

        let mut rows = vec![("identity".to_string(), self.exact_moments.identity.clone())];
        if let Some(fg) = &self.exact_moments.full_group {
            rows.push(("full group".to_string(), fg.clone()));
        }
        out.push_str(&moment_table("exact moments", self.exact_moments.max_n, rows));
        out.push('\n');

        if let Some(num) = &self.numerical_moments {
            out.push_str(&format!(
                "numerical moments: selector {}, p <= {}, {} primes, baseline {}\n",
                num.selector, num.prime_bound, num.prime_count, num.baseline
            ));
            out.push_str(&moment_table(
                "",
                num.max_n,
                vec![(
                    "observed".to_string(),
                    num.moments.iter().map(|x| format!("{x:.5}")).collect(),
                )],
            ));
            let mut rows =
                vec![vec!["order".into(), "reference".into(), "observed".into(), "dev%".into(), "ok".into()]];
            for c in &num.even_checks {
                rows.push(vec![
                    format!("M{}", c.order),
                    format!("{:.5}", c.reference),
                    format!("{:.5}", c.observed),
                    format!("{:.3}", c.deviation_percent),
                    if c.within { "yes".into() } else { "NO".into() },
                ]);
            }
            for c in &num.odd_checks {
                rows.push(vec![
                    format!("M{}", c.order),
                    format!("|.| <= {:.4}", c.band),
                    format!("{:.5}", c.observed),
                    "-".into(),
                    if c.within { "yes".into() } else { "NO".into() },
                ]);
            }
            out.push_str(&aligned(&rows));
            out.push('\n');
        }

        if let Some(split) = &self.split_density {
            out.push_str(&format!(
                "split density: {}/{} torsion-free (fraction {:.4}) for p <= {}\n\n",
                split.torsion_free, split.total, split.fraction, split.bound
            ));
        }

        out.push_str("consistency\n");
        let mut rows = Vec::new();
        for c in &self.consistency {
            rows.push(vec![
                if c.passed { "[ok]".to_string() } else { "[FAIL]".to_string() },
                c.name.clone(),
                c.module.clone(),
                c.detail.clone(),
            ]);
        }
        out.push_str(&aligned(&rows));
        out
    }
}
