//! Checks of the functional LYZ inequality and its relatives, each reduced to
//! a [`VerificationReport`] with lhs, rhs and a pass verdict.

use std::collections::BTreeMap;
use std::time::Instant;

use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::{random_body, random_symmetric_body, Polytope};
use crate::ellipsoids::lyz_body;
use crate::error::{Error, Result};
use crate::io::{BodyJson, FnJson, SphericalMeasureJson};
use crate::isotropic::{ball_barthe, random_isotropic_measure, SphericalMeasure};
use crate::logconcave::{surface_measure, Backend, DiscreteMeasure, GridFn, LogConcaveFn, QuadratureSpec};
use crate::lyz::{check_positivity, gamma2_fn, gamma2_total_mass, EPS_POS};
use crate::numeric::{derive_seed, factorial, gamma_half, rng, sphere_directions, unit_ball_volume};

pub const TOL_ANALYTIC: f64 = 1e-9;
pub const TOL_NUMERIC: f64 = 3e-3;
pub const TOL_BALL_BARTHE: f64 = 1e-12;
/// Relative residual below which a grid potential counts as a cone.
pub const EPS_CONE: f64 = 1e-8;

pub const FLAG_NONCONVEX: &str = "nonconvex_input";
pub const FLAG_INFINITE_T: &str = "infinite_t";
pub const FLAG_UNBOUNDED: &str = "sup_unbounded_near_origin";
pub const FLAG_HYPOTHESIS: &str = "hypothesis_unmet";

const SYMMETRY_TOL: f64 = 1e-9;
const POLISH_CANDIDATES: usize = 16;
const POLISH_ITERS: usize = 64;
const PROBE_HALVINGS: i32 = 40;
const UNBOUNDED_GROWTH: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Main,
    LyzPolar,
    Mahler,
    BallBarthe,
    Containment,
}

impl CheckKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckKind::Main => "main",
            CheckKind::LyzPolar => "lyz_polar",
            CheckKind::Mahler => "mahler",
            CheckKind::BallBarthe => "ball_barthe",
            CheckKind::Containment => "containment",
        }
    }
}

/// +∞ goes out as the string "inf".
mod maybe_inf {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *v == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Raw::Str(s) => Err(D::Error::custom(format!("expected a number or \"inf\", found {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub kind: CheckKind,
    pub n: usize,
    #[serde(with = "maybe_inf")]
    pub lhs: f64,
    pub rhs: f64,
    #[serde(with = "maybe_inf")]
    pub ratio: f64,
    pub tolerance: f64,
    /// Whether this is a known equality instance, judged by |ratio − 1| ≤ tolerance.
    pub equality: bool,
    pub backend: Backend,
    /// Bound on the absolute error of the ratio.
    pub error_bound: f64,
    pub seed: u64,
    pub flags: Vec<String>,
    pub pass: bool,
}

impl VerificationReport {
    fn new(kind: CheckKind, n: usize, lhs: f64, rhs: f64, tolerance: f64, backend: Backend) -> Self {
        VerificationReport {
            id: kind.as_str().to_string(),
            kind,
            n,
            lhs,
            rhs,
            ratio: lhs / rhs,
            tolerance,
            equality: false,
            backend,
            error_bound: 0.0,
            seed: 0,
            flags: Vec::new(),
            pass: false,
        }
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }

    fn flag(&mut self, flag: &str) {
        if !self.has_flag(flag) {
            self.flags.push(flag.to_string());
        }
    }

    /// The verdict implied by the other fields.
    pub fn verdict(&self) -> bool {
        if self.ratio == f64::INFINITY {
            return self.has_flag(FLAG_INFINITE_T);
        }
        if !self.ratio.is_finite() {
            return false;
        }
        if self.equality {
            (self.ratio - 1.0).abs() <= self.tolerance
        } else {
            self.ratio >= 1.0 - self.tolerance
        }
    }

    fn finish(mut self) -> Self {
        self.pass = self.verdict();
        self
    }

    /// Report for an instance that could not be evaluated at all.
    fn failed(kind: CheckKind, n: usize, err: &Error) -> Self {
        let mut r = VerificationReport::new(kind, n, 0.0, 1.0, 0.0, Backend::Analytic);
        r.flags.push(format!("error: {err}"));
        r
    }
}

/// 8^{n/2}(n+1)^{(n+1)/2}Γ(n/2+1)ω_n/(n!nⁿ).
pub fn main_constant(n: usize) -> f64 {
    let nf = n as f64;
    8f64.powf(nf / 2.0) * (nf + 1.0).powf((nf + 1.0) / 2.0) * gamma_half(n + 2) * unit_ball_volume(n)
        / (factorial(n) * nf.powi(n as i32))
}

/// (n+1)^{(n+1)/2}ω_n/(n!n^{n/2}).
pub fn lyz_polar_constant(n: usize) -> f64 {
    let nf = n as f64;
    (nf + 1.0).powf((nf + 1.0) / 2.0) * unit_ball_volume(n) / (factorial(n) * nf.powf(nf / 2.0))
}

/// 4ⁿ/n!.
pub fn mahler_constant(n: usize) -> f64 {
    4f64.powi(n as i32) / factorial(n)
}

/// |K_t(f°)|·J(Γ₋₂f) for f = Cone(centred simplex, c₀) with c₀ ≥ 1: the
/// simplex attains the body inequality, so the product is c₀ⁿ times the constant.
pub fn c0_prediction(n: usize, c0: f64) -> f64 {
    c0.powi(n as i32) * main_constant(n)
}

fn is_centred_simplex(p: &Polytope) -> bool {
    p.vertices().len() == p.dim() + 1 && p.centroid().norm() <= 1e-9 * p.circumradius()
}

/// −log t = sup φ*(y/φ*(y)) over supp μ_f, with flags describing how it was found.
#[derive(Clone, Debug, PartialEq)]
pub struct NegLogT {
    pub value: f64,
    pub flags: Vec<&'static str>,
}

/// Exact −log t where the family allows it. Cones give c₀ for c₀ ≥ 1 and +∞
/// below; for 2-homogeneous potentials φ*(y/φ*(y)) = 1/φ*(y) blows up at o.
pub fn neg_log_t_closed(f: &LogConcaveFn) -> Option<NegLogT> {
    match f {
        LogConcaveFn::Cone { offset, .. } => Some(NegLogT {
            value: if *offset >= 1.0 { *offset } else { f64::INFINITY },
            flags: vec![],
        }),
        LogConcaveFn::Gaussian { .. } | LogConcaveFn::Quadratic(_) | LogConcaveFn::QuadMinkowski { .. } => {
            Some(NegLogT {
                value: f64::INFINITY,
                flags: vec![FLAG_UNBOUNDED],
            })
        }
        _ => None,
    }
}

/// Sampled −log t: scans the surface-measure nodes, polishes the 16 best by
/// coordinate golden section, then probes toward the origin for blow-up.
pub fn neg_log_t(f: &LogConcaveFn, spec: &QuadratureSpec) -> Result<NegLogT> {
    check_positivity(f)?;
    let dual = f.legendre()?;
    let objective = |y: &DVector<f64>| -> Result<f64> {
        let s = dual.potential(y);
        if !s.is_finite() {
            return Ok(f64::NEG_INFINITY);
        }
        if !(s > EPS_POS) {
            return Err(Error::PositivityViolation { value: s, radius: y.norm() });
        }
        Ok(dual.potential(&(y / s)))
    };

    let mut top: Vec<(f64, DVector<f64>)> = Vec::new();
    let mut failure = None;
    let mut infinite = false;
    f.for_each_node(spec, |x, _, _, grads| {
        if failure.is_some() || infinite {
            return;
        }
        for (y, _) in grads {
            if y.iter().all(|c| *c == 0.0) {
                continue;
            }
            match objective(y) {
                Err(e) => failure = Some(e),
                Ok(v) if v == f64::INFINITY => infinite = true,
                Ok(v) if v.is_finite() => {
                    if top.len() < POLISH_CANDIDATES || v > top[top.len() - 1].0 {
                        let at = top.partition_point(|(w, _)| *w >= v);
                        top.insert(at, (v, x.clone()));
                        top.truncate(POLISH_CANDIDATES);
                    }
                }
                Ok(_) => {}
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    if infinite {
        return Ok(NegLogT {
            value: f64::INFINITY,
            flags: vec![],
        });
    }
    let Some((mut best, mut best_x)) = top.first().cloned() else {
        return Err(Error::InvalidInput("surface measure has no usable atoms".into()));
    };

    let at = |x: &DVector<f64>| -> f64 {
        match f.gradient(x) {
            Ok(y) if y.iter().any(|c| *c != 0.0) => objective(&y).unwrap_or(f64::NEG_INFINITY),
            _ => f64::NEG_INFINITY,
        }
    };
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    for (v0, x0) in &top {
        let mut x = x0.clone();
        let mut v = *v0;
        let r = 2.0 * x.norm() / spec.resolution as f64 + 1e-6;
        for i in 0..x.len() {
            let (mut a, mut b) = (x[i] - r, x[i] + r);
            let mut probe = x.clone();
            let mut eval = |t: f64| {
                probe[i] = t;
                at(&probe)
            };
            let (mut c, mut d) = (b - golden * (b - a), a + golden * (b - a));
            let (mut fc, mut fd) = (eval(c), eval(d));
            for _ in 0..POLISH_ITERS {
                if fc >= fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - golden * (b - a);
                    fc = eval(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + golden * (b - a);
                    fd = eval(d);
                }
            }
            let (t, ft) = if fc >= fd { (c, fc) } else { (d, fd) };
            if ft > v {
                v = ft;
                x[i] = t;
            }
        }
        if v > best {
            best = v;
            best_x = x;
        }
    }

    let mut flags = Vec::new();
    for k in 1..=PROBE_HALVINGS {
        let v = at(&(&best_x * 0.5f64.powi(k)));
        if v > UNBOUNDED_GROWTH * best.abs().max(1.0) {
            flags.push(FLAG_UNBOUNDED);
            break;
        }
    }
    Ok(NegLogT { value: best, flags })
}

/// |{x : g(x) ≥ t}|.
pub fn level_set_volume(g: &LogConcaveFn, t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidLevel { t });
    }
    level_set_volume_at(g, -t.ln())
}

/// |{φ_g ≤ s}|; s = +∞ stands for t = 0 and gives the whole space.
pub fn level_set_volume_at(g: &LogConcaveFn, s: f64) -> Result<f64> {
    if s == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let n = g.dim() as f64;
    let half = n / 2.0;
    let s_pos = s.max(0.0);
    Ok(match g {
        LogConcaveFn::Gaussian { scale, .. } => unit_ball_volume(g.dim()) * (s_pos / scale).powf(half),
        LogConcaveFn::Quadratic(q) => unit_ball_volume(g.dim()) * s_pos.powf(half) / q.determinant().sqrt(),
        LogConcaveFn::QuadMinkowski { body, scale } => (s_pos / scale).powf(half) * body.body().volume(),
        LogConcaveFn::Cone { body, offset } => (s + offset).max(0.0).powf(n) * body.body().volume(),
        LogConcaveFn::Indicator { body, offset } => {
            if s >= offset - 1e-12 * offset.abs().max(1.0) {
                body.body().volume()
            } else {
                0.0
            }
        }
        LogConcaveFn::Grid(grid) => grid.sublevel_volume(s),
    })
}

fn origin_is_strict_minimum(g: &GridFn) -> bool {
    let lat = g.lattice();
    let near = 0.5 * lat.spacing.iter().cloned().fold(f64::INFINITY, f64::min);
    let phi0 = g.potential(&DVector::zeros(g.dim()));
    phi0.is_finite()
        && g.values()
            .iter()
            .enumerate()
            .all(|(i, v)| !v.is_finite() || lat.point(i).norm() <= near || *v > phi0)
}

/// |K_t(f°)|·J(Γ₋₂f) against 8^{n/2}(n+1)^{(n+1)/2}Γ(n/2+1)ω_n/(n!nⁿ).
pub fn main_check(f: &LogConcaveFn, backend: Backend, spec: &QuadratureSpec) -> Result<VerificationReport> {
    check_positivity(f)?;
    let n = f.dim();
    let rhs = main_constant(n);
    let tolerance = match backend {
        Backend::Analytic => TOL_ANALYTIC,
        Backend::Numeric => TOL_NUMERIC,
    };
    let nlt = match backend {
        Backend::Analytic => neg_log_t_closed(f).ok_or(Error::BackendUnavailable {
            family: f.family(),
            backend: "analytic",
        })?,
        Backend::Numeric => neg_log_t(f, spec)?,
    };
    let mut flags = Vec::new();
    if f.is_nonconvex() {
        flags.push(FLAG_NONCONVEX);
    }
    if let LogConcaveFn::Grid(g) = f {
        if !origin_is_strict_minimum(g) {
            flags.push(FLAG_HYPOTHESIS);
        }
    }
    flags.extend(nlt.flags.iter().copied());

    let mut report = if nlt.value == f64::INFINITY || nlt.flags.contains(&FLAG_UNBOUNDED) {
        // |K_t(f°)| = +∞ and the inequality is strict
        let mut r = VerificationReport::new(CheckKind::Main, n, f64::INFINITY, rhs, tolerance, backend);
        r.flag(FLAG_INFINITE_T);
        r
    } else {
        let volume = level_set_volume_at(&f.legendre()?, nlt.value)?;
        let g2 = gamma2_fn(f, backend, spec)?;
        let lhs = volume * gamma2_total_mass(&g2.form);
        let mut r = VerificationReport::new(CheckKind::Main, n, lhs, rhs, tolerance, backend);
        // det(M)^{−1/2} moves by about (n/2)·δM/λ_min relatively
        r.error_bound = r.ratio * 0.5 * n as f64 * g2.error_bound / g2.form.min_eigenvalue();
        r
    };
    for flag in flags {
        report.flag(flag);
    }
    report.equality = !report.has_flag(FLAG_HYPOTHESIS)
        && matches!(f, LogConcaveFn::Cone { body, offset }
            if (offset - 1.0).abs() <= 1e-12 && is_centred_simplex(body.body()));
    report.seed = spec.seed;
    Ok(report.finish())
}

/// |K°|·|Γ₋₂K| against (n+1)^{(n+1)/2}ω_n/(n!n^{n/2}).
pub fn lyz_polar_check(p: &Polytope) -> Result<VerificationReport> {
    let n = p.dim();
    let lhs = p.polar()?.volume() * lyz_body(p)?.volume();
    let mut r = VerificationReport::new(CheckKind::LyzPolar, n, lhs, lyz_polar_constant(n), TOL_ANALYTIC, Backend::Analytic);
    r.equality = is_centred_simplex(p);
    Ok(r.finish())
}

/// |K|·|K°| for an origin-symmetric polytope.
pub fn mahler_product(p: &Polytope) -> Result<f64> {
    p.check_symmetric(SYMMETRY_TOL)?;
    Ok(p.volume() * p.polar()?.volume())
}

/// The Mahler product against 4ⁿ/n!, with equality expected for
/// parallelepipeds and their polars.
pub fn mahler_check(p: &Polytope) -> Result<VerificationReport> {
    let n = p.dim();
    let lhs = mahler_product(p)?;
    let mut r = VerificationReport::new(CheckKind::Mahler, n, lhs, mahler_constant(n), TOL_ANALYTIC, Backend::Analytic);
    r.equality = p.facets().len() == 2 * n || p.vertices().len() == 2 * n;
    Ok(r.finish())
}

/// det ∫ l u⊗u dμ against exp ∫ log l dμ.
pub fn ball_barthe_check(mu: &SphericalMeasure, l: &[f64]) -> Result<VerificationReport> {
    let bb = ball_barthe(mu, l)?;
    let mut r = VerificationReport::new(CheckKind::BallBarthe, mu.dim(), bb.lhs, bb.rhs, TOL_BALL_BARTHE, Backend::Analytic);
    r.ratio = bb.log_ratio.exp();
    Ok(r.finish())
}

/// Checks x₀/r ∈ K_t(f°) for x₀ = Σ w_k x_k/φ*(x_k), r = |ν|, by comparing
/// φ*(x₀/r) with −log t = max_k φ*(x_k/φ*(x_k)). The ratio is
/// 1 + (rhs − lhs)/max(1, |rhs|), so slack shows up as ratio > 1.
pub fn containment_check(f: &LogConcaveFn, nu: &DiscreteMeasure) -> Result<VerificationReport> {
    check_positivity(f)?;
    let n = f.dim();
    if nu.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: nu.dim(),
        });
    }
    let dual = f.legendre()?;
    let mut x0 = DVector::zeros(n);
    let mut nlt = f64::NEG_INFINITY;
    for k in 0..nu.len() {
        if nu.weight(k) == 0.0 {
            continue;
        }
        let x = nu.point_vec(k);
        let s = dual.potential(&x);
        if !(s > EPS_POS) || !s.is_finite() {
            return Err(Error::PositivityViolation { value: s, radius: x.norm() });
        }
        x0 += &x * (nu.weight(k) / s);
        nlt = nlt.max(dual.potential(&(&x / s)));
    }
    let lhs = dual.potential(&(x0 / nu.total_mass()));
    let (tolerance, backend) = if f.is_grid() {
        (TOL_NUMERIC, Backend::Numeric)
    } else {
        (TOL_ANALYTIC, Backend::Analytic)
    };
    let mut r = VerificationReport::new(CheckKind::Containment, n, lhs, nlt, tolerance, backend);
    if nlt == f64::INFINITY {
        r.ratio = f64::INFINITY;
        r.flag(FLAG_INFINITE_T);
    } else {
        r.ratio = 1.0 + (nlt - lhs) / nlt.abs().max(1.0);
    }
    if f.is_nonconvex() {
        r.flag(FLAG_NONCONVEX);
    }
    Ok(r.finish())
}

/// Outcome of testing whether a sampled potential has the form ‖x‖_K − c.
#[derive(Clone, Debug)]
pub struct ConeDiagnostic {
    pub is_cone: bool,
    pub c: f64,
    /// max |x·∇φ(x) − φ(x) − c| over the tested nodes.
    pub max_residual: f64,
    /// Hull of boundary points of {φ + c ≤ 1}; None if too few were found.
    pub k_estimate: Option<Polytope>,
    pub samples: usize,
}

/// Tests φ(x) = x·∇φ(x) − c on the nodes of a grid. The radial derivative
/// is taken as (φ(2x) − φ(o))/2, exact for both 1- and 2-homogeneous
/// potentials up to a constant.
pub fn cone_form_diagnostic(g: &GridFn) -> Result<ConeDiagnostic> {
    if !origin_is_strict_minimum(g) {
        return Err(Error::OriginNotMinimum);
    }
    let n = g.dim();
    let lat = g.lattice();
    let near = 0.5 * lat.spacing.iter().cloned().fold(f64::INFINITY, f64::min);
    let phi0 = g.potential(&DVector::zeros(n));
    let mut d = Vec::new();
    let mut scale = 1f64;
    for (i, &v) in g.values().iter().enumerate() {
        let x = lat.point(i);
        if !v.is_finite() || x.norm() <= near {
            continue;
        }
        let far = g.potential(&(&x * 2.0));
        if far.is_finite() {
            d.push((far - phi0) / 2.0 - v);
            scale = scale.max(v.abs()).max(far.abs());
        }
    }
    if d.is_empty() {
        return Err(Error::InvalidInput("grid has no node x with 2x inside the domain".into()));
    }
    let samples = d.len();
    let mut sorted = d.clone();
    sorted.sort_by(f64::total_cmp);
    let c = if samples % 2 == 1 {
        sorted[samples / 2]
    } else {
        0.5 * (sorted[samples / 2 - 1] + sorted[samples / 2])
    };
    let max_residual = d.iter().map(|v| (v - c).abs()).fold(0.0, f64::max);
    let is_cone = max_residual <= EPS_CONE * scale;
    Ok(ConeDiagnostic {
        is_cone,
        c,
        max_residual,
        k_estimate: level_body(g, c),
        samples,
    })
}

/// Boundary of {φ + c ≤ 1} by bisection along rays from the origin.
fn level_body(g: &GridFn, c: f64) -> Option<Polytope> {
    let n = g.dim();
    let lat = g.lattice();
    let dirs: Vec<DVector<f64>> = match n {
        1 => vec![DVector::from_element(1, 1.0), DVector::from_element(1, -1.0)],
        2 => (0..256)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / 256.0;
                DVector::from_vec(vec![a.cos(), a.sin()])
            })
            .collect(),
        _ => sphere_directions(n, 600, 0xC0FE),
    };
    let level = |x: &DVector<f64>| g.potential(x) + c - 1.0;
    let mut pts = Vec::new();
    for u in dirs {
        let exit = (0..n)
            .filter(|&i| u[i] != 0.0)
            .map(|i| if u[i] > 0.0 { lat.upper(i) / u[i] } else { lat.origin[i] / u[i] })
            .fold(f64::INFINITY, f64::min);
        let mut hi = exit * (1.0 - 1e-9);
        if !(hi > 0.0) || !(level(&(&u * hi)) >= 0.0) {
            continue;
        }
        let mut lo = 0.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if level(&(&u * mid)) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        pts.push(&u * (0.5 * (lo + hi)));
    }
    Polytope::new(pts).ok()
}

/// Which randomized family a sweep draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Main,
    LyzPolar,
    Mahler,
    BallBarthe,
}

impl SweepKind {
    pub fn check(&self) -> CheckKind {
        match self {
            SweepKind::Main => CheckKind::Main,
            SweepKind::LyzPolar => CheckKind::LyzPolar,
            SweepKind::Mahler => CheckKind::Mahler,
            SweepKind::BallBarthe => CheckKind::BallBarthe,
        }
    }
}

/// Everything needed to rerun one check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "input", rename_all = "snake_case")]
pub enum Payload {
    Function {
        function: FnJson,
        backend: Backend,
        resolution: usize,
    },
    Body {
        body: BodyJson,
    },
    Measure {
        measure: SphericalMeasureJson,
        l: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub id: String,
    pub kind: CheckKind,
    pub n: usize,
    pub seed: u64,
    pub payload: Payload,
}

/// The `index`-th instance of a sweep; depends only on (kind, seed, n, index).
pub fn make_instance(kind: SweepKind, seed: u64, n: usize, index: usize) -> Result<Instance> {
    let s = derive_seed(seed, index as u64);
    let mut r = rng(s);
    let payload = match kind {
        SweepKind::Main => {
            let body = random_body(s, n, n + 1 + index % 6)?;
            let function = if index % 3 == 2 {
                LogConcaveFn::quad_minkowski(body, r.gen_range(0.25..2.0))?
            } else {
                LogConcaveFn::cone(body, r.gen_range(0.5..3.0))?
            };
            Payload::Function {
                function: FnJson::from_fn(&function),
                backend: Backend::Analytic,
                resolution: QuadratureSpec::default().resolution,
            }
        }
        SweepKind::LyzPolar => Payload::Body {
            body: BodyJson::from_body(&random_body(s, n, n + 1 + index % 6)?),
        },
        SweepKind::Mahler => Payload::Body {
            body: BodyJson::from_body(&random_symmetric_body(s, n, n + index % 4)?),
        },
        SweepKind::BallBarthe => {
            let mu = random_isotropic_measure(s, n, n + 1 + index % 6, index % 2 == 1)?;
            let (lo, hi) = (0.1f64.ln(), 10f64.ln());
            let l = (0..mu.len()).map(|_| r.gen_range(lo..hi).exp()).collect();
            Payload::Measure {
                measure: SphericalMeasureJson::from_measure(&mu),
                l,
            }
        }
    };
    Ok(Instance {
        id: format!("{}-n{}-{:04}", kind.check().as_str(), n, index),
        kind: kind.check(),
        n,
        seed: s,
        payload,
    })
}

/// Runs one instance; replaying a dumped instance reproduces its report.
pub fn run_instance(inst: &Instance) -> Result<VerificationReport> {
    let mut report = match (&inst.kind, &inst.payload) {
        (CheckKind::Main, Payload::Function { function, backend, resolution }) => {
            let spec = QuadratureSpec::with_resolution(*resolution).seed(inst.seed);
            main_check(&function.to_fn()?, *backend, &spec)?
        }
        (CheckKind::LyzPolar, Payload::Body { body }) => lyz_polar_check(&body.to_body()?)?,
        (CheckKind::Mahler, Payload::Body { body }) => mahler_check(&body.to_body()?)?,
        (CheckKind::BallBarthe, Payload::Measure { measure, l }) => ball_barthe_check(&measure.to_measure()?, l)?,
        (kind, _) => {
            return Err(Error::InvalidInput(format!(
                "payload does not match check kind {}",
                kind.as_str()
            )))
        }
    };
    report.id = inst.id.clone();
    report.seed = inst.seed;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub kind: SweepKind,
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub min_ratio: f64,
    pub failed: usize,
    pub flags: BTreeMap<String, usize>,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    /// Sorted by id.
    pub reports: Vec<VerificationReport>,
    /// Instances whose report failed, for replay.
    pub failures: Vec<Instance>,
    pub summary: SweepSummary,
}

impl SweepResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.reports.iter().all(|r| r.pass)
    }
}

/// `count` random instances checked in parallel. Deterministic per seed.
pub fn sweep(kind: SweepKind, count: usize, seed: u64, n: usize) -> SweepResult {
    let start = Instant::now();
    let mut results: Vec<(VerificationReport, Option<Instance>)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let inst = match make_instance(kind, seed, n, i) {
                Ok(inst) => inst,
                Err(e) => {
                    let mut r = VerificationReport::failed(kind.check(), n, &e);
                    r.id = format!("{}-n{}-{:04}", kind.check().as_str(), n, i);
                    r.seed = derive_seed(seed, i as u64);
                    return (r, None);
                }
            };
            let report = run_instance(&inst).unwrap_or_else(|e| {
                let mut r = VerificationReport::failed(inst.kind, n, &e);
                r.id = inst.id.clone();
                r.seed = inst.seed;
                r
            });
            let dump = (!report.pass).then_some(inst);
            (report, dump)
        })
        .collect();
    results.sort_by(|a, b| a.0.id.cmp(&b.0.id));

    let mut flags = BTreeMap::new();
    for (r, _) in &results {
        for f in &r.flags {
            *flags.entry(f.clone()).or_insert(0) += 1;
        }
    }
    let min_ratio = results.iter().map(|(r, _)| r.ratio).fold(f64::INFINITY, f64::min);
    let failed = results.iter().filter(|(r, _)| !r.pass).count();
    let (reports, failures): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    SweepResult {
        reports,
        failures: failures.into_iter().flatten().collect(),
        summary: SweepSummary {
            kind,
            n,
            count,
            seed,
            min_ratio,
            failed,
            flags,
            seconds: start.elapsed().as_secs_f64(),
        },
    }
}

/// Input to a containment check: a function and, optionally, the atoms of ν.
/// Without atoms ν is the sampled surface measure of the function.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContainmentInput {
    pub function: FnJson,
    #[serde(default)]
    pub points: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
}

impl ContainmentInput {
    pub fn measure(&self, f: &LogConcaveFn, spec: &QuadratureSpec) -> Result<DiscreteMeasure> {
        match (&self.points, &self.weights) {
            (Some(points), weights) => {
                let pts: Vec<DVector<f64>> = points.iter().map(|p| DVector::from_row_slice(p)).collect();
                let w = weights.clone().unwrap_or_else(|| vec![1.0; pts.len()]);
                DiscreteMeasure::from_points(&pts, w)
            }
            (None, Some(_)) => Err(Error::InvalidInput("weights: given without points".into())),
            (None, None) => Ok(surface_measure(f, spec)?.measure),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let pi = std::f64::consts::PI;
        assert!((main_constant(2) - 3.0 * 3f64.sqrt() * pi).abs() < 1e-12);
        assert!((lyz_polar_constant(2) - 3f64.powf(1.5) * pi / 4.0).abs() < 1e-13);
        assert_eq!(mahler_constant(2), 8.0);
    }

    #[test]
    fn report_serializes_inf() {
        let mut r = VerificationReport::new(CheckKind::Main, 2, f64::INFINITY, 1.0, 1e-9, Backend::Analytic);
        r.flag(FLAG_INFINITE_T);
        let r = r.finish();
        assert!(r.pass);
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"ratio\":\"inf\""), "{text}");
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn simplex_cone_is_equality() {
        for n in [2, 3] {
            let f = LogConcaveFn::cone(Polytope::regular_simplex(n).unwrap(), 1.0).unwrap();
            let r = main_check(&f, Backend::Analytic, &Default::default()).unwrap();
            assert!(r.equality && r.pass, "{r:?}");
            assert!((r.ratio - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn square_cone_is_strict() {
        let f = LogConcaveFn::cone(Polytope::cube(2).unwrap(), 1.0).unwrap();
        let r = main_check(&f, Backend::Analytic, &Default::default()).unwrap();
        assert!(r.pass && !r.equality && r.ratio > 1.0);
    }

    #[test]
    fn small_offset_is_infinite() {
        let f = LogConcaveFn::cone(Polytope::regular_simplex(2).unwrap(), 0.5).unwrap();
        let r = main_check(&f, Backend::Analytic, &Default::default()).unwrap();
        assert!(r.pass && r.has_flag(FLAG_INFINITE_T) && r.ratio == f64::INFINITY);
    }

    #[test]
    fn numeric_neg_log_t() {
        let spec = QuadratureSpec::with_resolution(64);
        let k = Polytope::regular_simplex(2).unwrap();
        let c = neg_log_t(&LogConcaveFn::cone(k.clone(), 1.5).unwrap(), &spec).unwrap();
        assert!((c.value - 1.5).abs() < 1e-9, "{c:?}");
        let c = neg_log_t(&LogConcaveFn::cone(k, 0.7).unwrap(), &spec).unwrap();
        assert_eq!(c.value, f64::INFINITY);
        let g = neg_log_t(&LogConcaveFn::gaussian(2, 0.5).unwrap(), &spec).unwrap();
        assert!(g.value.is_finite() && g.flags.contains(&FLAG_UNBOUNDED), "{g:?}");
    }

    #[test]
    fn level_sets() {
        let pi = std::f64::consts::PI;
        let dual = LogConcaveFn::gaussian(2, 0.5).unwrap().legendre().unwrap();
        assert!((level_set_volume(&dual, (-0.5f64).exp()).unwrap() - pi).abs() < 1e-12);
        let cone = LogConcaveFn::cone(Polytope::cube(2).unwrap(), 1.0).unwrap();
        let v = level_set_volume(&cone.legendre().unwrap(), (-1f64).exp()).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        assert!(matches!(level_set_volume(&dual, 0.0), Err(Error::InvalidLevel { .. })));
        assert!(matches!(level_set_volume(&dual, 1.5), Err(Error::InvalidLevel { .. })));
    }

    #[test]
    fn polar_and_mahler() {
        let tri = Polytope::regular_simplex(2).unwrap();
        let r = lyz_polar_check(&tri).unwrap();
        assert!(r.equality && (r.ratio - 1.0).abs() < 1e-12);
        let sq = lyz_polar_check(&Polytope::cube(2).unwrap()).unwrap();
        assert!((sq.ratio - 8.0 / (3.0 * 3f64.sqrt())).abs() < 1e-12);
        assert!((mahler_product(&Polytope::cube(2).unwrap()).unwrap() - 8.0).abs() < 1e-12);
        let disc = mahler_product(&Polytope::regular_polygon(64, 1.0, 0.0).unwrap()).unwrap();
        assert!(disc > 8.0 && (disc - std::f64::consts::PI.powi(2)).abs() < 0.05);
        assert!(matches!(mahler_product(&tri), Err(Error::NotOriginSymmetric { .. })));
    }

    #[test]
    fn containment() {
        let f = LogConcaveFn::gaussian(2, 0.5).unwrap();
        let x = DVector::from_vec(vec![0.6, -0.8]);
        let single = DiscreteMeasure::from_points(&[x], vec![1.0]).unwrap();
        let r = containment_check(&f, &single).unwrap();
        assert!(r.pass && (r.ratio - 1.0).abs() < 1e-12);
        let cone = LogConcaveFn::cone(Polytope::regular_simplex(2).unwrap(), 1.0).unwrap();
        let mu = surface_measure(&cone, &QuadratureSpec::with_resolution(32)).unwrap().measure;
        assert!(containment_check(&cone, &mu).unwrap().pass);
    }

    #[test]
    fn cone_diagnostic() {
        let lat = crate::logconcave::Lattice::centered(2, 2.0, 81).unwrap();
        let cone = LogConcaveFn::cone(Polytope::cube(2).unwrap(), 1.0).unwrap();
        let g = GridFn::sample(lat.clone(), |x| cone.potential(x)).unwrap();
        let d = cone_form_diagnostic(&g).unwrap();
        assert!(d.is_cone && (d.c - 1.0).abs() < 1e-12, "{d:?}");
        let k = d.k_estimate.unwrap();
        assert!((k.volume() - 4.0).abs() < 0.05, "{}", k.volume());
        let gauss = GridFn::sample(lat, |x| x.norm_squared() / 2.0).unwrap();
        assert!(!cone_form_diagnostic(&gauss).unwrap().is_cone);
    }

    #[test]
    fn sweep_is_deterministic() {
        let a = sweep(SweepKind::LyzPolar, 6, 7, 2);
        let b = sweep(SweepKind::LyzPolar, 6, 7, 2);
        assert!(a.passed());
        assert_eq!(a.reports, b.reports);
        let inst = make_instance(SweepKind::Main, 7, 2, 3).unwrap();
        let text = serde_json::to_string(&inst).unwrap();
        let back: Instance = serde_json::from_str(&text).unwrap();
        assert_eq!(run_instance(&back).unwrap(), run_instance(&inst).unwrap());
    }
}
