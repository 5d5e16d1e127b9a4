use super::poly::{big, PolyFunction};
use crate::error::{invalid, Result};
use num_rational::Rational64;
use num_traits::{One, Zero};

/// Validates a 1-based direction.
fn axis(direction: usize) -> Result<usize> {
    if !(1..=3).contains(&direction) {
        return Err(invalid("direction", format!("{direction} not in 1..=3")));
    }
    Ok(direction - 1)
}

/// `H_δ f = (1/(δ+1)) t^{δ+1} ∂_{x_j} f + t^δ ∂_{v_j} f`.
pub fn apply_h(f: &PolyFunction, delta: Rational64, direction: usize) -> Result<PolyFunction> {
    let a = axis(direction)?;
    let one = Rational64::one();
    let spatial = f.diff_x(a).mul_t_pow(delta + one).scale(&big(one / (delta + one)));
    Ok(spatial.add(&f.diff_v(a).mul_t_pow(delta)))
}

/// `H_δ^k f`.
pub fn apply_h_power(f: &PolyFunction, delta: Rational64, direction: usize, k: u32) -> Result<PolyFunction> {
    let mut g = f.clone();
    for _ in 0..k {
        g = apply_h(&g, delta, direction)?;
    }
    Ok(g)
}

/// `H_{δ1}^{a1} H_{δ2}^{a2} f`.
pub fn apply_mixed(
    f: &PolyFunction,
    deltas: (Rational64, Rational64),
    alpha: (u32, u32),
    direction: usize,
) -> Result<PolyFunction> {
    let g = apply_h_power(f, deltas.1, direction, alpha.1)?;
    apply_h_power(&g, deltas.0, direction, alpha.0)
}

/// Kinetic transport `∂_t f + Σ_i v_i ∂_{x_i} f`.
pub fn transport(f: &PolyFunction) -> PolyFunction {
    let mut out = f.diff_t();
    for i in 0..3 {
        out = out.add(&f.diff_x(i).mul_v(i));
    }
    out
}

/// `[∂_t + v·∂_x, P] f` for an operator `P`.
pub fn commutator_with_transport(
    f: &PolyFunction,
    op: impl Fn(&PolyFunction) -> Result<PolyFunction>,
) -> Result<PolyFunction> {
    Ok(transport(&op(f)?).sub(&op(&transport(f))?))
}

/// Nonzero residual of an identity, with its offending monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityViolation {
    pub identity: String,
    pub residual: PolyFunction,
}

impl std::fmt::Display for IdentityViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: residual {}", self.identity, self.residual)
    }
}

/// `[T, H_δ^k] f − δk t^{δ−1} ∂_{v_j} H_δ^{k−1} f`; zero for every `f`.
pub fn commutator_residual(f: &PolyFunction, delta: Rational64, direction: usize, k: u32) -> Result<PolyFunction> {
    if k == 0 {
        return commutator_with_transport(f, |g| Ok(g.clone()));
    }
    let a = axis(direction)?;
    let lhs = commutator_with_transport(f, |g| apply_h_power(g, delta, direction, k))?;
    let inner = apply_h_power(f, delta, direction, k - 1)?;
    let coeff = big(delta * Rational64::from_integer(k as i64));
    let rhs = inner.diff_v(a).mul_t_pow(delta - Rational64::one()).scale(&coeff);
    Ok(lhs.sub(&rhs))
}

/// Residual of the mixed expansion
/// `[T, H_{δ1}^{a1} H_{δ2}^{a2}] = δ1 a1 t^{δ1−1} ∂_v H_{δ1}^{a1−1} H_{δ2}^{a2}
///  + δ2 a2 t^{δ2−1} ∂_v H_{δ1}^{a1} H_{δ2}^{a2−1}`.
pub fn mixed_commutator_residual(
    f: &PolyFunction,
    deltas: (Rational64, Rational64),
    alpha: (u32, u32),
    direction: usize,
) -> Result<PolyFunction> {
    let a = axis(direction)?;
    let lhs = commutator_with_transport(f, |g| apply_mixed(g, deltas, alpha, direction))?;
    let one = Rational64::one();
    let mut rhs = PolyFunction::zero();
    if alpha.0 > 0 {
        let g = apply_mixed(f, deltas, (alpha.0 - 1, alpha.1), direction)?;
        let c = big(deltas.0 * Rational64::from_integer(alpha.0 as i64));
        rhs = rhs.add(&g.diff_v(a).mul_t_pow(deltas.0 - one).scale(&c));
    }
    if alpha.1 > 0 {
        let g = apply_mixed(f, deltas, (alpha.0, alpha.1 - 1), direction)?;
        let c = big(deltas.1 * Rational64::from_integer(alpha.1 as i64));
        rhs = rhs.add(&g.diff_v(a).mul_t_pow(deltas.1 - one).scale(&c));
    }
    Ok(lhs.sub(&rhs))
}

/// Admissible `(λ, γ, s)` with the derived exponents `δ1 = λ` and `δ2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VFParams {
    pub lambda: Rational64,
    pub gamma: Rational64,
    pub s: Rational64,
    pub delta1: Rational64,
    pub delta2: Rational64,
    pub direction: usize,
}

impl VFParams {
    /// `δ2 = 1` when `γ/2 + 2s ≥ 1`, otherwise `1 + (1 − 2τ)λ` with `τ = 2s/(2−γ)`.
    pub fn new(lambda: Rational64, gamma: Rational64, s: Rational64, direction: usize) -> Result<Self> {
        let zero = Rational64::zero();
        let one = Rational64::one();
        let two = Rational64::from_integer(2);
        axis(direction)?;
        if !(gamma > Rational64::from_integer(-3) && gamma < zero) {
            return Err(invalid("gamma", format!("{gamma} not in (-3, 0)")));
        }
        if !(s > zero && s < one) {
            return Err(invalid("s", format!("{s} not in (0, 1)")));
        }
        if gamma + two * s <= -one {
            return Err(invalid("gamma+2s", "must exceed -1"));
        }
        let tau = two * s / (two - gamma);
        let floor = if one / (two * tau) > one { one / (two * tau) } else { one };
        if lambda <= floor {
            return Err(invalid("lambda", format!("{lambda} must exceed {floor}")));
        }
        let delta2 = if gamma / two + two * s >= one { one } else { one + (one - two * tau) * lambda };
        let p = Self { lambda, gamma, s, delta1: lambda, delta2, direction };
        if !(p.delta1 > p.delta2 && p.delta2 >= one) {
            return Err(invalid("delta", format!("need δ1 > δ2 ≥ 1, got {} and {}", p.delta1, p.delta2)));
        }
        Ok(p)
    }

    /// Coefficients `(c, −c)` of `H_{δ1}` and `t^{δ1−δ2}H_{δ2}` producing `t^{λ+1}∂_x`.
    pub fn spatial_coefficients(&self) -> (Rational64, Rational64) {
        let one = Rational64::one();
        let c = (self.delta2 + one) * (self.delta1 + one) / (self.delta2 - self.delta1);
        (c, -c)
    }

    /// Coefficients of `H_{δ1}` and `t^{δ1−δ2}H_{δ2}` producing `t^λ∂_v`.
    pub fn velocity_coefficients(&self) -> (Rational64, Rational64) {
        let one = Rational64::one();
        let d = self.delta2 - self.delta1;
        (-(self.delta1 + one) / d, (self.delta2 + one) / d)
    }
}

/// `t^{λ+1}∂_{x_j} f` and `t^λ∂_{v_j} f` rebuilt from the two vector fields.
pub fn reconstruct_derivatives(f: &PolyFunction, vp: &VFParams) -> Result<(PolyFunction, PolyFunction)> {
    if vp.delta1 == vp.delta2 {
        return Err(invalid("delta", "δ1 = δ2 makes the reconstruction singular"));
    }
    let h1 = apply_h(f, vp.delta1, vp.direction)?;
    let h2 = apply_h(f, vp.delta2, vp.direction)?.mul_t_pow(vp.delta1 - vp.delta2);
    let combine = |(a, b): (Rational64, Rational64)| h1.scale(&big(a)).add(&h2.scale(&big(b)));
    Ok((combine(vp.spatial_coefficients()), combine(vp.velocity_coefficients())))
}

/// Differences between the reconstructions and the direct derivatives.
pub fn reconstruction_residuals(f: &PolyFunction, vp: &VFParams) -> Result<(PolyFunction, PolyFunction)> {
    let (gx, gv) = reconstruct_derivatives(f, vp)?;
    let a = vp.direction - 1;
    let one = Rational64::one();
    let dx = f.diff_x(a).mul_t_pow(vp.lambda + one);
    let dv = f.diff_v(a).mul_t_pow(vp.lambda);
    Ok((gx.sub(&dx), gv.sub(&dv)))
}

/// Turns a residual into a violation report when it is nonzero.
pub fn check_identity(name: impl Into<String>, residual: PolyFunction) -> std::result::Result<(), IdentityViolation> {
    if residual.is_zero() {
        Ok(())
    } else {
        Err(IdentityViolation { identity: name.into(), residual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn x1v1() -> PolyFunction {
        PolyFunction::term(1, r(0, 1), [1, 0, 0], [1, 0, 0])
    }

    #[test]
    fn h_on_x1v1() {
        let h = apply_h(&x1v1(), r(1, 1), 1).unwrap();
        let expect = PolyFunction::term(1, r(2, 1), [0; 3], [1, 0, 0])
            .scale(&big(r(1, 2)))
            .add(&PolyFunction::term(1, r(1, 1), [1, 0, 0], [0; 3]));
        assert_eq!(h, expect);
        assert!(apply_h(&PolyFunction::term(1, r(0, 1), [0; 3], [0; 3]), r(1, 1), 1).unwrap().is_zero());
    }

    #[test]
    fn first_commutator_by_hand() {
        // T H₁(x₁v₁) = 2tv₁ + x₁ and H₁ T(x₁v₁) = 2tv₁, so the commutator is x₁ = ∂_{v₁}(x₁v₁).
        let f = x1v1();
        let c = commutator_with_transport(&f, |g| apply_h(g, r(1, 1), 1)).unwrap();
        assert_eq!(c, PolyFunction::term(1, r(0, 1), [1, 0, 0], [0; 3]));
        assert!(commutator_residual(&f, r(1, 1), 1, 1).unwrap().is_zero());
        assert!(commutator_residual(&f, r(1, 1), 1, 0).unwrap().is_zero());
    }

    #[test]
    fn higher_commutator_instance() {
        let f = PolyFunction::term(1, r(0, 1), [2, 0, 0], [3, 0, 0]);
        assert!(commutator_residual(&f, r(2, 1), 1, 3).unwrap().is_zero());
    }

    #[test]
    fn worked_reconstruction_instance() {
        let vp = VFParams::new(r(2, 1), r(-1, 1), r(1, 2), 1).unwrap();
        assert_eq!((vp.delta1, vp.delta2), (r(2, 1), r(5, 3)));
        assert_eq!(vp.spatial_coefficients(), (r(-24, 1), r(24, 1)));
        assert_eq!(vp.velocity_coefficients(), (r(9, 1), r(-8, 1)));
        let f = x1v1();
        let (gx, gv) = reconstruction_residuals(&f, &vp).unwrap();
        assert!(gx.is_zero() && gv.is_zero());
        // 9H_{δ1}f − 8t^{1/3}H_{δ2}f = t²∂_{v₁}f
        let lhs = apply_h(&f, r(2, 1), 1)
            .unwrap()
            .scale(&big(r(9, 1)))
            .sub(&apply_h(&f, r(5, 3), 1).unwrap().mul_t_pow(r(1, 3)).scale(&big(r(8, 1))));
        assert_eq!(lhs, f.diff_v(0).mul_t_pow(r(2, 1)));
    }

    #[test]
    fn reconstruction_kernel() {
        let vp = VFParams::new(r(2, 1), r(-1, 1), r(1, 2), 1).unwrap();
        let f = PolyFunction::term(5, r(1, 1), [0, 2, 0], [0, 1, 1]);
        let (gx, gv) = reconstruct_derivatives(&f, &vp).unwrap();
        assert!(gx.is_zero() && gv.is_zero());
    }

    #[test]
    fn strong_dissipation_uses_unit_delta() {
        let vp = VFParams::new(r(2, 1), r(-1, 2), r(3, 4), 2).unwrap();
        assert_eq!(vp.delta2, r(1, 1));
        assert!(VFParams::new(r(1, 1), r(-1, 1), r(1, 2), 1).is_err());
        assert!(VFParams::new(r(3, 2), r(-1, 1), r(1, 2), 1).is_err());
        assert!(VFParams::new(r(2, 1), r(-1, 1), r(1, 2), 4).is_err());
    }

    #[test]
    fn mixed_expansion_needs_delta_factors() {
        // Dropping the δ factors leaves a nonzero residual as soon as δ ≠ 1.
        let f = PolyFunction::term(1, r(0, 1), [1, 0, 0], [2, 0, 0]);
        let deltas = (r(2, 1), r(5, 3));
        assert!(mixed_commutator_residual(&f, deltas, (1, 1), 1).unwrap().is_zero());
        let lhs = commutator_with_transport(&f, |g| apply_mixed(g, deltas, (1, 1), 1)).unwrap();
        let one = Rational64::one();
        let t1 = apply_mixed(&f, deltas, (0, 1), 1).unwrap().diff_v(0).mul_t_pow(deltas.0 - one);
        let t2 = apply_mixed(&f, deltas, (1, 0), 1).unwrap().diff_v(0).mul_t_pow(deltas.1 - one);
        assert!(!lhs.sub(&t1.add(&t2)).is_zero());
    }
}
