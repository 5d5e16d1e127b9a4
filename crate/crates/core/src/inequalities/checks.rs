use super::{empirical_constant, gagliardo_norm, ratio, InequalityReport, InequalityWitness, FIT_SLACK};
use crate::corpus::CorpusMember;
use crate::error::{invalid, Error, Result};
use crate::exec::Exec;
use crate::params::SoftPotentialParams;
use crate::spectral::{
    apply_multiplier, apply_regularizer, weighted_sobolev_norm, MultiplierSpec, RegularizerSpec,
    SpectralField, VelocityGrid,
};
use num_complex::Complex64;

fn finite(name: &str, values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(name.to_string()));
    }
    Ok(())
}

fn sample_all(corpus: &[CorpusMember], grid: VelocityGrid, exec: Exec) -> Result<Vec<SpectralField>> {
    exec.map(corpus, |m| m.function.sample(grid)).into_iter().collect()
}

// ---------------------------------------------------------------------------
// Interpolation: ‖⟨D⟩^τ u‖ against ‖⟨v⟩u‖ and ‖⟨v⟩^{γ/2}⟨D⟩^s u‖.

/// Norms entering the fractional interpolation inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationTerms {
    /// `‖⟨D⟩^τ u‖`.
    pub lhs: f64,
    /// `‖⟨v⟩ u‖`.
    pub moment: f64,
    /// `‖⟨v⟩^{γ/2} ⟨D⟩^s u‖`.
    pub dissipation: f64,
    /// Hölder exponent on the dissipation term.
    pub theta: f64,
}

impl InterpolationTerms {
    pub fn sum_rhs(&self) -> f64 {
        self.moment + self.dissipation
    }

    pub fn product_rhs(&self) -> f64 {
        self.dissipation.powf(self.theta) * self.moment.powf(1.0 - self.theta)
    }

    /// `a^θ b^{1−θ} ≤ θa + (1−θ)b ≤ a + b`.
    pub fn am_gm_holds(&self) -> bool {
        let p = self.product_rhs();
        let mid = self.theta * self.dissipation + (1.0 - self.theta) * self.moment;
        let tol = 1e-14 * self.sum_rhs();
        p <= mid + tol && mid <= self.sum_rhs() + tol
    }
}

pub fn interpolation_terms(u: &SpectralField, prm: &SoftPotentialParams) -> Result<InterpolationTerms> {
    let t = InterpolationTerms {
        lhs: weighted_sobolev_norm(u, 0.0, prm.tau())?,
        moment: weighted_sobolev_norm(u, 1.0, 0.0)?,
        dissipation: weighted_sobolev_norm(u, prm.gamma() / 2.0, prm.s())?,
        theta: prm.theta(),
    };
    finite("interpolation norms", &[t.lhs, t.moment, t.dissipation])?;
    Ok(t)
}

/// Sum-form and product-form witnesses for one function at given constants.
pub fn verify_interpolation_tau(
    id: &str,
    u: &SpectralField,
    prm: &SoftPotentialParams,
    sum_constant: f64,
    product_constant: f64,
) -> Result<(InequalityWitness, InequalityWitness)> {
    let t = interpolation_terms(u, prm)?;
    Ok((
        InequalityWitness::new(id, t.lhs, t.sum_rhs(), sum_constant),
        InequalityWitness::new(id, t.lhs, t.product_rhs(), product_constant),
    ))
}

/// Fits both forms on `corpus` over `grid` and its refinement.
pub fn interpolation_suite(
    corpus: &[CorpusMember],
    grid: VelocityGrid,
    prm: &SoftPotentialParams,
    exec: Exec,
) -> Result<(InequalityReport, InequalityReport)> {
    let terms = |g: VelocityGrid| -> Result<Vec<InterpolationTerms>> {
        exec.map(corpus, |m| interpolation_terms(&m.function.sample(g)?, prm))
            .into_iter()
            .collect()
    };
    let base = terms(grid)?;
    let fine = terms(grid.refined())?;
    let fit = |ts: &[InterpolationTerms], prod: bool| {
        let r: Vec<f64> = ts
            .iter()
            .map(|t| ratio(t.lhs, if prod { t.product_rhs() } else { t.sum_rhs() }))
            .collect();
        empirical_constant(&r)
    };
    let params = [("gamma", prm.gamma()), ("s", prm.s()), ("tau", prm.tau()), ("theta", prm.theta())];
    let mut out = Vec::new();
    for (id, prod) in [("interpolation-sum", false), ("interpolation-product", true)] {
        let c = fit(&base, prod) * (1.0 + FIT_SLACK);
        let ws: Vec<InequalityWitness> = corpus
            .iter()
            .zip(&base)
            .map(|(m, t)| {
                let rhs = if prod { t.product_rhs() } else { t.sum_rhs() };
                InequalityWitness::new(&m.id, t.lhs, rhs, c)
            })
            .collect();
        let mut rep = InequalityReport::from_witnesses(id, &params, &ws, c);
        rep.refinement_ratio = Some(fit(&fine, prod) / fit(&base, prod));
        if prod {
            let bad: Vec<String> = corpus
                .iter()
                .zip(&base)
                .filter(|(_, t)| !t.am_gm_holds())
                .map(|(m, _)| format!("{}:am-gm", m.id))
                .collect();
            rep.metrics.insert("am_gm_failures".into(), bad.len() as f64);
            rep.failures.extend(bad);
        }
        out.push(rep);
    }
    let product = out.pop().expect("two reports");
    Ok((out.pop().expect("two reports"), product))
}

// ---------------------------------------------------------------------------
// Weighted ε-inequality: ‖⟨v⟩^s⟨D⟩^s h‖ ≤ ε‖⟨D⟩h‖ + C_ε‖⟨v⟩^{s/(1−s)}h‖.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedEpsTerms {
    /// `‖⟨v⟩^s ⟨D⟩^s h‖`.
    pub lhs: f64,
    /// `‖⟨D⟩ h‖`.
    pub derivative: f64,
    /// `‖⟨v⟩^{s/(1−s)} h‖`.
    pub moment: f64,
}

impl WeightedEpsTerms {
    /// Smallest `C_ε ≥ 0` for which this function satisfies the inequality.
    pub fn required_constant(&self, eps: f64) -> f64 {
        let excess = self.lhs - eps * self.derivative;
        if excess <= 0.0 {
            0.0
        } else {
            excess / self.moment
        }
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid("s", format!("{s} not in (0, 1)")));
    }
    Ok(())
}

pub fn weighted_eps_terms(h: &SpectralField, s: f64) -> Result<WeightedEpsTerms> {
    check_s(s)?;
    let t = WeightedEpsTerms {
        lhs: weighted_sobolev_norm(h, s, s)?,
        derivative: weighted_sobolev_norm(h, 0.0, 1.0)?,
        moment: weighted_sobolev_norm(h, s / (1.0 - s), 0.0)?,
    };
    finite("weighted-eps norms", &[t.lhs, t.derivative, t.moment])?;
    Ok(t)
}

/// Witness `lhs ≤ ε‖⟨D⟩h‖ + C_ε‖⟨v⟩^{s/(1−s)}h‖`, with `constant_used = C_ε`.
pub fn verify_weighted_eps(id: &str, h: &SpectralField, s: f64, eps: f64, c_eps: f64) -> Result<InequalityWitness> {
    if !(eps > 0.0) {
        return Err(invalid("eps", format!("{eps} must be positive")));
    }
    let t = weighted_eps_terms(h, s)?;
    let rhs = eps * t.derivative + c_eps * t.moment;
    Ok(InequalityWitness {
        test_function_id: id.to_string(),
        lhs: t.lhs,
        rhs,
        constant_used: c_eps,
        margin: rhs - t.lhs,
    })
}

/// Least-squares slope of `y` against `x`.
pub fn regression_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Fits `C_ε` for each ε and regresses `log C_ε` on `log ε`.
pub fn weighted_eps_suite(
    corpus: &[CorpusMember],
    grid: VelocityGrid,
    s: f64,
    eps_values: &[f64],
    exec: Exec,
) -> Result<InequalityReport> {
    check_s(s)?;
    if eps_values.len() < 2 || eps_values.iter().any(|&e| !(e > 0.0)) {
        return Err(invalid("eps", "need at least two positive values"));
    }
    let terms = |g: VelocityGrid| -> Result<Vec<WeightedEpsTerms>> {
        exec.map(corpus, |m| weighted_eps_terms(&m.function.sample(g)?, s))
            .into_iter()
            .collect()
    };
    let base = terms(grid)?;
    let fine = terms(grid.refined())?;
    let fit = |ts: &[WeightedEpsTerms], eps: f64| {
        empirical_constant(&ts.iter().map(|t| t.required_constant(eps)).collect::<Vec<_>>())
    };
    let mut witnesses = Vec::new();
    let mut metrics = std::collections::BTreeMap::new();
    let mut log_c = Vec::new();
    let mut worst_refinement: f64 = 1.0;
    for &eps in eps_values {
        let c = fit(&base, eps) * (1.0 + FIT_SLACK);
        let cf = fit(&fine, eps);
        let rr = cf / fit(&base, eps);
        if (rr - 1.0).abs() > (worst_refinement - 1.0).abs() {
            worst_refinement = rr;
        }
        metrics.insert(format!("c_eps[{eps}]"), c);
        log_c.push(c.ln());
        for (m, t) in corpus.iter().zip(&base) {
            let rhs = eps * t.derivative + c * t.moment;
            witnesses.push(InequalityWitness {
                test_function_id: format!("{}@eps={eps}", m.id),
                lhs: t.lhs,
                rhs,
                constant_used: c,
                margin: rhs - t.lhs,
            });
        }
    }
    let log_eps: Vec<f64> = eps_values.iter().map(|e| e.ln()).collect();
    let slope = regression_slope(&log_eps, &log_c);
    let expected = -s / (1.0 - s);
    let rel = ((slope - expected) / expected).abs();
    metrics.insert("slope".into(), slope);
    metrics.insert("expected_slope".into(), expected);
    metrics.insert("slope_relative_error".into(), rel);
    let fitted = metrics.values().next().copied().unwrap_or(0.0);
    let mut rep = InequalityReport::from_witnesses("weighted-epsilon", &[("s", s)], &witnesses, fitted);
    rep.corpus_size = corpus.len();
    rep.refinement_ratio = Some(worst_refinement);
    rep.metrics = metrics;
    if rel > 0.25 {
        rep.failures.push(format!("slope {slope:.4} vs {expected:.4}"));
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Composition bound ‖F(g)‖_{H^s} ≤ C̃‖g‖_{H^s} for nonnegative g.

/// Lipschitz maps with `F(0) = 0`, `0 ≤ F' ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Composition {
    /// `log(1 + x)`.
    Log1p,
    /// `x / (1 + x)`.
    Saturation,
}

impl Composition {
    pub fn apply(&self, x: f64) -> f64 {
        match self {
            Self::Log1p => x.ln_1p(),
            Self::Saturation => x / (1.0 + x),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Self::Log1p => "composition-log1p",
            Self::Saturation => "composition-saturation",
        }
    }
}

/// `H^s` norms of `g` and `F(g)` computed as a multiplier and as a double integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositionTerms {
    pub g_multiplier: f64,
    pub fg_multiplier: f64,
    pub g_gagliardo: f64,
    pub fg_gagliardo: f64,
}

impl CompositionTerms {
    /// Worst factor between the two norm computations.
    pub fn agreement_factor(&self) -> f64 {
        let f = |a: f64, b: f64| if a == 0.0 && b == 0.0 { 1.0 } else { (a / b).max(b / a) };
        f(self.g_multiplier, self.g_gagliardo).max(f(self.fg_multiplier, self.fg_gagliardo))
    }
}

pub fn composition_terms(g: &SpectralField, s: f64, map: Composition) -> Result<CompositionTerms> {
    check_s(s)?;
    let min = g.min_real();
    if min < 0.0 {
        return Err(Error::NegativeSamples(min));
    }
    let fg = g.map_values(|z| Complex64::new(map.apply(z.re), 0.0))?;
    let bracket = MultiplierSpec::JapaneseBracket { order: s };
    let t = CompositionTerms {
        g_multiplier: apply_multiplier(g, bracket)?.l2_norm(),
        fg_multiplier: apply_multiplier(&fg, bracket)?.l2_norm(),
        g_gagliardo: gagliardo_norm(g, s)?,
        fg_gagliardo: gagliardo_norm(&fg, s)?,
    };
    finite("composition norms", &[t.g_multiplier, t.fg_multiplier, t.g_gagliardo, t.fg_gagliardo])?;
    Ok(t)
}

/// Multiplier-form witness at the given constant.
pub fn verify_composition_bound(
    id: &str,
    g: &SpectralField,
    s: f64,
    map: Composition,
    constant: f64,
) -> Result<InequalityWitness> {
    let t = composition_terms(g, s, map)?;
    Ok(InequalityWitness::new(id, t.fg_multiplier, t.g_multiplier, constant))
}

/// Fits the multiplier-form constant; the double-integral form is checked with
/// constant 1, which the pointwise bounds `|F(a) − F(b)| ≤ |a − b|` and
/// `F(x) ≤ x` guarantee.
pub fn composition_suite(
    corpus: &[CorpusMember],
    grid: VelocityGrid,
    s: f64,
    map: Composition,
    exec: Exec,
) -> Result<InequalityReport> {
    let terms = |g: VelocityGrid| -> Result<Vec<CompositionTerms>> {
        exec.map(corpus, |m| composition_terms(&m.function.sample(g)?, s, map))
            .into_iter()
            .collect()
    };
    let base = terms(grid)?;
    let fine = terms(grid.refined())?;
    let fit = |ts: &[CompositionTerms]| {
        empirical_constant(&ts.iter().map(|t| ratio(t.fg_multiplier, t.g_multiplier)).collect::<Vec<_>>())
    };
    let c = fit(&base) * (1.0 + FIT_SLACK);
    let mut ws: Vec<InequalityWitness> = corpus
        .iter()
        .zip(&base)
        .map(|(m, t)| InequalityWitness::new(&m.id, t.fg_multiplier, t.g_multiplier, c))
        .collect();
    let structural: Vec<InequalityWitness> = corpus
        .iter()
        .zip(&base)
        .map(|(m, t)| InequalityWitness::new(format!("{}:double-integral", m.id), t.fg_gagliardo, t.g_gagliardo, 1.0))
        .collect();
    let agreement = base.iter().map(|t| t.agreement_factor()).fold(1.0, f64::max);
    let double_integral_constant =
        empirical_constant(&base.iter().map(|t| ratio(t.fg_gagliardo, t.g_gagliardo)).collect::<Vec<_>>());
    ws.extend(structural);
    let mut rep = InequalityReport::from_witnesses(map.id(), &[("s", s)], &ws, c);
    rep.corpus_size = corpus.len();
    rep.refinement_ratio = Some(fit(&fine) / fit(&base));
    rep.metrics.insert("agreement_factor".into(), agreement);
    rep.metrics.insert("double_integral_constant".into(), double_integral_constant);
    if agreement > 4.0 {
        rep.failures.push(format!("agreement factor {agreement:.3} > 4"));
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Regularizer: ‖Λ⁻¹g‖ + ‖θ^{1/2}Λ⁻¹∂g‖ + ‖θΛ⁻¹∂²g‖ ≤ 3‖g‖.

/// Literal constant of the regularizer bound.
pub const REGULARIZER_CONSTANT: f64 = 3.0;

/// Checks the bound along axis 0 (every axis in higher dimension).
pub fn verify_regularizer_bounds(id: &str, g: &SpectralField, theta: f64) -> Result<InequalityWitness> {
    let r = RegularizerSpec::new(theta)?;
    let mut lhs: f64 = 0.0;
    for axis in 0..g.grid().dim() {
        let mut sum = 0.0;
        for order in 0..=2u8 {
            sum += apply_regularizer(g, r, order, axis)?.l2_norm();
        }
        lhs = lhs.max(sum);
    }
    Ok(InequalityWitness::new(id, lhs, g.l2_norm(), REGULARIZER_CONSTANT))
}

pub fn regularizer_suite(
    corpus: &[CorpusMember],
    grid: VelocityGrid,
    thetas: &[f64],
    exec: Exec,
) -> Result<InequalityReport> {
    let fields = sample_all(corpus, grid, exec)?;
    let mut ws = Vec::new();
    let mut worst: f64 = 0.0;
    for &theta in thetas {
        let batch: Vec<Result<InequalityWitness>> = exec.map_range(fields.len(), |i| {
            verify_regularizer_bounds(&format!("{}@theta={theta}", corpus[i].id), &fields[i], theta)
        });
        for w in batch {
            let w = w?;
            worst = worst.max(ratio(w.lhs, w.rhs / REGULARIZER_CONSTANT));
            ws.push(w);
        }
    }
    let mut rep = InequalityReport::from_witnesses("regularizer-bound", &[], &ws, REGULARIZER_CONSTANT);
    rep.corpus_size = corpus.len();
    for (i, t) in thetas.iter().enumerate() {
        rep.params.insert(format!("theta[{i}]"), *t);
    }
    rep.metrics.insert("max_ratio".into(), worst);
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Radial reduction of the coercivity norm.

/// Maximum deviation of `u` under coordinate permutations and reflections,
/// relative to `max|u|`.
pub fn symmetry_defect(u: &SpectralField) -> f64 {
    let g = *u.grid();
    let d = g.dim();
    let n = g.n();
    let peak = u.max_abs();
    if d == 1 || peak == 0.0 {
        return 0.0;
    }
    let x = u.samples();
    let perms: &[[usize; 3]] = if d == 2 {
        &[[1, 0, 2]]
    } else {
        &[[1, 0, 2], [0, 2, 1], [2, 1, 0]]
    };
    let mut worst: f64 = 0.0;
    for flat in 0..g.len() {
        let idx = g.multi_index(flat);
        for p in perms {
            let mut q = [0usize; 3];
            for a in 0..d {
                q[a] = idx[p[a]];
            }
            worst = worst.max((x[g.flat_index(&q[..d])] - x[flat]).norm());
        }
        for a in 0..d {
            let mut q = idx;
            q[a] = (n - idx[a]) % n;
            worst = worst.max((x[g.flat_index(&q[..d])] - x[flat]).norm());
        }
    }
    worst / peak
}

/// `‖⟨v⟩^{γ/2}⟨D⟩^s u‖`, the coercivity norm with its angular part removed.
///
/// Accepts one-dimensional data or multidimensional data invariant under the
/// grid's permutation/reflection group to `1e-12`.
pub fn triple_norm_radial(u: &SpectralField, prm: &SoftPotentialParams) -> Result<f64> {
    let defect = symmetry_defect(u);
    if defect > 1e-12 {
        return Err(Error::NotRadial(format!("symmetry defect {defect:e}")));
    }
    weighted_sobolev_norm(u, prm.gamma() / 2.0, prm.s())
}

/// Witness for `‖⟨D⟩^τ u‖ ≤ C(‖⟨v⟩u‖ + triple norm)`.
pub fn verify_radial_interpolation(
    id: &str,
    u: &SpectralField,
    prm: &SoftPotentialParams,
    constant: f64,
) -> Result<InequalityWitness> {
    let triple = triple_norm_radial(u, prm)?;
    let lhs = weighted_sobolev_norm(u, 0.0, prm.tau())?;
    let moment = weighted_sobolev_norm(u, 1.0, 0.0)?;
    Ok(InequalityWitness::new(id, lhs, moment + triple, constant))
}

/// Radial-form check on the corpus using the sum-form constant.
pub fn radial_suite(
    corpus: &[CorpusMember],
    grid: VelocityGrid,
    prm: &SoftPotentialParams,
    constant: f64,
    exec: Exec,
) -> Result<InequalityReport> {
    let ws: Vec<InequalityWitness> = exec
        .map(corpus, |m| verify_radial_interpolation(&m.id, &m.function.sample(grid)?, prm, constant))
        .into_iter()
        .collect::<Result<_>>()?;
    Ok(InequalityReport::from_witnesses(
        "interpolation-radial",
        &[("gamma", prm.gamma()), ("s", prm.s())],
        &ws,
        constant,
    ))
}
