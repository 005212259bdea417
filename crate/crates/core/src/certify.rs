//! Certification of congruence primes for Ikeda lifts.
//!
//! From the normalized symmetric-square values V, the convolution and Dirichlet
//! values U, and the hypothesis list, every prime ell dividing the numerator of V
//! is either certified with depth b = val_ell(V) or rejected with a reason.

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::arith::{factor, is_prime_u64, val_p};
use crate::exact::{dirichlet_l_critical, format_factored, ExactScalar};
use crate::heckechar::{cm_form, shift_identity_points, ImagQuadField};
use crate::ikeda::{nonvanishing_sweep, std_l_points, LiftContext};
use crate::lseries::alg::default_den_digits;
use crate::lseries::{AlgContext, AlgValue, Calibration, CandidateReport, LFunctionSpec};
use crate::qexp::{cusp_dimension_level_one, unique_level_one_form, QExpansion};

/// Parameters of one certification run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertConfig {
    pub disc: i64,
    pub n: i64,
    pub k: i64,
    pub m: i64,
    pub t: i64,
    #[serde(default = "default_digits")]
    pub precision_digits: u32,
    #[serde(default = "default_prime_bound")]
    pub prime_bound: u64,
    #[serde(default)]
    pub denominator_digit_bound: Option<u32>,
    #[serde(rename = "T", default = "default_t")]
    pub big_t: u64,
}

fn default_digits() -> u32 {
    crate::lseries::DEFAULT_DIGITS
}

fn default_prime_bound() -> u64 {
    10_000
}

fn default_t() -> u64 {
    1
}

impl CertConfig {
    /// K = Q(sqrt(-3)), n = 5, k = 13, m = 2, t = -24, T = 1.
    pub fn sec9() -> Self {
        CertConfig {
            disc: -3,
            n: 5,
            k: 13,
            m: 2,
            t: -24,
            precision_digits: default_digits(),
            prime_bound: default_prime_bound(),
            denominator_digit_bound: None,
            big_t: 1,
        }
    }

    pub fn den_digits(&self) -> u32 {
        self.denominator_digit_bound.unwrap_or_else(|| default_den_digits(self.precision_digits))
    }

    /// Upper end of the t range: min(-6, -4n).
    pub fn t_upper(&self) -> i64 {
        (-6i64).min(-4 * self.n)
    }

    /// Every violated invariant, or Ok.
    pub fn validate(&self) -> Result<()> {
        let field = ImagQuadField::new(self.disc)?;
        let mut bad = Vec::new();
        if self.n < 2 {
            bad.push(format!("n = {} must be at least 2", self.n));
        }
        if self.n != 2 * self.m && self.n != 2 * self.m + 1 {
            bad.push(format!("n = {} is neither 2m nor 2m + 1 for m = {}", self.n, self.m));
        }
        if self.k < 1 {
            bad.push(format!("k = {} must be positive", self.k));
        }
        if self.n > 2 * self.k - 1 {
            bad.push(format!("n = {} exceeds 2k - 1 = {}", self.n, 2 * self.k - 1));
        }
        let lo = -2 * self.k - 2 * self.m;
        if self.t < lo || self.t >= self.t_upper() {
            bad.push(format!("t = {} outside {} <= t < {}", self.t, lo, self.t_upper()));
        }
        if self.t % field.unit_order as i64 != 0 {
            bad.push(format!("unit order {} does not divide t = {}", field.unit_order, self.t));
        }
        if self.precision_digits < 60 {
            bad.push(format!("precision_digits = {} below 60", self.precision_digits));
        }
        if 2 * self.den_digits() >= self.precision_digits {
            bad.push(format!("denominator_digit_bound = {} must be below precision_digits / 2", self.den_digits()));
        }
        if self.big_t == 0 {
            bad.push("T must be positive".into());
        }
        if self.prime_bound < 5 {
            bad.push(format!("prime_bound = {} too small", self.prime_bound));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::ConfigInvalid(bad))
        }
    }

    /// Exponent u = -2k - 2m - t of the CM form g.
    pub fn cm_exponent(&self) -> i64 {
        -2 * self.k - 2 * self.m - self.t
    }
}

/// A factored rational as two prime-power lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactoredRational {
    pub value: String,
    pub num_factors: Vec<(String, u32)>,
    pub den_factors: Vec<(String, u32)>,
}

impl FactoredRational {
    pub fn new(q: &Rational) -> Self {
        let list = |n: &Integer| -> Vec<(String, u32)> {
            factor(&Integer::from(n.abs_ref())).factors.iter().map(|(p, e)| (p.to_string(), *e)).collect()
        };
        FactoredRational { value: format_factored(q), num_factors: list(q.numer()), den_factors: list(q.denom()) }
    }
}

/// One recognized L_alg entry of the report.
#[derive(Debug, Clone, Serialize)]
pub struct AlgEntry {
    pub label: String,
    pub point: i64,
    pub value: String,
    pub float: String,
}

impl AlgEntry {
    fn new(v: &AlgValue, point: i64) -> Self {
        AlgEntry {
            label: v.label.clone(),
            point,
            value: format_factored(&v.rational),
            float: v.value.to_string_radix(10, Some(30)),
        }
    }
}

/// One exact Dirichlet value L(j, chi^j) / pi^j.
#[derive(Debug, Clone, Serialize)]
pub struct DirichletEntry {
    pub j: u32,
    pub value: ExactScalar,
    pub rational_part: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Certified,
    Rejected(String),
}

impl Serialize for Status {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Status::Certified => s.serialize_str("Certified"),
            Status::Rejected(r) => s.serialize_str(&format!("Rejected: {r}")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificationReport {
    pub ell: u64,
    pub checks: Vec<Check>,
    pub depth: i64,
    pub status: Status,
    /// Informational remarks that do not gate certification.
    pub notes: Vec<String>,
}

impl CertificationReport {
    pub fn certified(&self) -> bool {
        self.status == Status::Certified
    }
}

/// Functional-equation candidates tried for one L-function.
#[derive(Debug, Clone, Serialize)]
pub struct SelectionLog {
    pub l_function: String,
    pub selected: String,
    pub candidates: Vec<CandidateLog>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateLog {
    pub description: String,
    pub root_number: Option<i32>,
    pub residual: Option<String>,
    pub accepted: bool,
}

impl From<&CandidateReport> for CandidateLog {
    fn from(r: &CandidateReport) -> Self {
        CandidateLog {
            description: r.description.clone(),
            root_number: r.root_number,
            residual: r.residual.map(|x| format!("{x:.3e}")),
            accepted: r.accepted,
        }
    }
}

/// Forms and evaluators shared by the steps of a run.
pub struct Pipeline {
    pub config: CertConfig,
    pub field: ImagQuadField,
    pub lift: LiftContext,
    pub phi: QExpansion,
    pub g: QExpansion,
    pub alg: AlgContext,
    conv: Option<LFunctionSpec>,
}

/// Coefficients computed for phi and g.
fn truncation(config: &CertConfig) -> usize {
    (config.prime_bound as usize).max(crate::qexp::DEFAULT_TRUNCATION)
}

impl Pipeline {
    pub fn new(config: &CertConfig) -> Result<Self> {
        config.validate()?;
        let field = ImagQuadField::new(config.disc)?;
        if config.n % 2 == 0 {
            return Err(Error::Unsupported("even n needs phi of level D_K; only odd n is automated".into()));
        }
        let lift = LiftContext::new(config.n, config.k, config.disc)?;
        let weight = lift.phi_weight();
        if cusp_dimension_level_one(weight) != 1 {
            return Err(Error::EtaNotUnit(format!("dim S_{weight}(SL_2(Z)) = {}", cusp_dimension_level_one(weight))));
        }
        let len = truncation(config);
        let phi = unique_level_one_form(weight, len)?;
        let g = cm_form(&field, config.cm_exponent(), len)?;
        let mut alg = AlgContext::new(&phi, config.precision_digits, Calibration::default())?;
        alg.den_digits = config.den_digits();
        Ok(Pipeline { config: config.clone(), field, lift, phi, g, alg, conv: None })
    }

    /// Points j at which L(j, phi x g) enters U.
    pub fn conv_points(&self) -> Result<Vec<i64>> {
        let s0 = Rational::from(2 * self.config.n) + Rational::from((self.config.t, 2));
        let bc = std_l_points(&self.lift, &s0);
        let pts = shift_identity_points(self.config.cm_exponent(), &bc);
        pts.iter()
            .map(|p| {
                if *p.denom() != 1 {
                    return Err(Error::NotCritical { s: 0, reason: format!("non-integral point {p}") });
                }
                Ok(p.numer().to_i64().unwrap())
            })
            .collect()
    }

    /// V = prod_{i=2}^{n} L_alg(i + 2k - 1, Sym^2 phi x chi^{i+1}).
    pub fn compute_v(&mut self) -> Result<(Rational, Vec<AlgEntry>)> {
        let mut v = Rational::from(1);
        let mut entries = Vec::new();
        for i in 2..=self.config.n {
            let a = self.alg.lalg_sym2(i)?;
            v *= &a.rational;
            entries.push(AlgEntry::new(&a, i + self.phi.weight - 1));
        }
        Ok((v, entries))
    }

    /// U = prod_j L_alg(j, phi x g) times the rational parts of L(i, chi^i) / pi^i, i = 2..n.
    pub fn compute_u(&mut self) -> Result<(Rational, Vec<AlgEntry>, Vec<DirichletEntry>)> {
        let mut u = Rational::from(1);
        if self.conv.is_none() {
            self.conv = Some(self.alg.conv_setup(&self.g)?);
        }
        let spec = self.conv.clone().unwrap();
        let mut conv = Vec::new();
        let mut pts = self.conv_points()?;
        pts.sort_unstable();
        for j in pts {
            let a = self.alg.lalg_conv(&spec, &self.g, j)?;
            u *= &a.rational;
            conv.push(AlgEntry::new(&a, j));
        }
        let chi = self.field.character();
        let mut dir = Vec::new();
        for i in 2..=self.config.n as u32 {
            let val = dirichlet_l_critical(i, &chi.pow(i))?;
            u *= &val.rational;
            dir.push(DirichletEntry { j: i, rational_part: format_factored(&val.rational), value: val });
        }
        Ok((u, conv, dir))
    }

    pub fn selections(&self) -> Vec<SelectionLog> {
        self.alg
            .selections
            .iter()
            .map(|(name, reps)| SelectionLog {
                l_function: name.clone(),
                selected: reps.iter().find(|r| r.accepted).map(|r| r.description.clone()).unwrap_or_default(),
                candidates: reps.iter().map(CandidateLog::from).collect(),
            })
            .collect()
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.into(), passed, detail }
}

/// Runs the hypothesis list for one prime, in order.
pub fn check_hypotheses(
    ell: u64,
    config: &CertConfig,
    field: &ImagQuadField,
    phi: &QExpansion,
    v: &Rational,
    u: &Rational,
) -> Result<CertificationReport> {
    let mut checks = Vec::new();
    let bound = 2 * config.k + 2 * config.m;
    checks.push(check("ell > 2k + 2m", ell as i64 > bound, format!("{ell} vs {bound}")));
    // h_K = 1 and i(phi) = 1 at level one
    let bad = 2 * field.abs_disc();
    checks.push(check("ell does not divide 2 h_K D_K i(phi)", bad % ell != 0, format!("2 h_K D_K i(phi) = {bad}")));
    let lo = -2 * config.k - 2 * config.m;
    let t_ok = config.t >= lo && config.t < config.t_upper();
    checks.push(check("t range", t_ok, format!("{} <= {} < {}", lo, config.t, config.t_upper())));
    let big_n = config.big_t * field.abs_disc();
    let units = field.unit_group_order_mod(big_n) * config.big_t;
    let vu = val_p(&Rational::from(units.clone()), ell)?;
    checks.push(check("val_ell(T #(O_K/N O_K)^x) = 0", vu == 0, format!("N = {big_n}, T #(O_K/N O_K)^x = {units}")));
    let val_u = val_p(u, ell)?;
    checks.push(check("val_ell(U) = 0", val_u == 0, format!("val_{ell}(U) = {val_u}")));
    let b = val_p(v, ell)?;
    checks.push(check("b = val_ell(V) >= 1", b >= 1, format!("val_{ell}(V) = {b}")));
    let sweep_bound = config.prime_bound.min(phi.truncation() as u64);
    let witness = if ell == 2 || field.abs_disc() % ell == 0 {
        None
    } else {
        nonvanishing_sweep(phi, config.disc, ell, sweep_bound)?
    };
    checks.push(match witness {
        Some(p) => check("non-vanishing witness", true, format!("p = {p}, a(p) = {} mod {ell}", phi.int_coeff(p as usize).mod_u(ell as u32))),
        None => check(
            "non-vanishing witness",
            false,
            format!("no odd p <= {sweep_bound} with p = -1 mod D_K and a(p) != 0 mod {ell}; the image of the residual representation may be too small"),
        ),
    });
    let mut notes = Vec::new();
    if (ell as usize) <= phi.truncation() {
        let a = phi.int_coeff(ell as usize);
        let ord = !a.is_divisible(&Integer::from(ell));
        notes.push(format!(
            "{} at {ell}: a({ell}) mod {ell} = {}",
            if ord { "ordinary" } else { "not ordinary" },
            a.mod_u(ell as u32)
        ));
    }
    notes.push("coprimality with the constant A_3 is not checked (the constant is not specified)".into());
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    let status =
        if failed.is_empty() { Status::Certified } else { Status::Rejected(format!("fails {}", failed[0].name)) };
    Ok(CertificationReport { ell, checks, depth: b.max(0), status, notes })
}

/// Full run output.
#[derive(Debug, Clone, Serialize)]
pub struct CertificationRun {
    pub config_echo: CertConfig,
    pub lalg_sym2: Vec<AlgEntry>,
    pub lalg_conv: Vec<AlgEntry>,
    pub dirichlet: Vec<DirichletEntry>,
    #[serde(rename = "V")]
    pub v: FactoredRational,
    #[serde(rename = "U")]
    pub u: FactoredRational,
    pub functional_equations: Vec<SelectionLog>,
    pub reports: Vec<CertificationReport>,
}

impl CertificationRun {
    pub fn certified(&self) -> Vec<u64> {
        self.reports.iter().filter(|r| r.certified()).map(|r| r.ell).collect()
    }
}

/// Candidate primes: divisors of the numerator of V above 2k + 2m.
pub fn candidate_primes(v: &Rational, config: &CertConfig) -> Vec<u64> {
    let bound = (2 * config.k + 2 * config.m) as u64;
    let mut out: Vec<u64> = factor(&Integer::from(v.numer().abs_ref()))
        .factors
        .iter()
        .filter_map(|(p, _)| p.to_u64())
        .filter(|&p| p > bound && is_prime_u64(p))
        .collect();
    out.sort_unstable();
    out
}

/// Computes V and U and checks every candidate prime.
pub fn congruence_primes(config: &CertConfig) -> Result<CertificationRun> {
    let mut pipe = Pipeline::new(config)?;
    let (v, sym2) = pipe.compute_v()?;
    let (u, conv, dirichlet) = pipe.compute_u()?;
    let mut reports = Vec::new();
    for ell in candidate_primes(&v, config) {
        reports.push(check_hypotheses(ell, config, &pipe.field, &pipe.phi, &v, &u)?);
    }
    Ok(CertificationRun {
        config_echo: config.clone(),
        lalg_sym2: sym2,
        lalg_conv: conv,
        dirichlet,
        v: FactoredRational::new(&v),
        u: FactoredRational::new(&u),
        functional_equations: pipe.selections(),
        reports,
    })
}
