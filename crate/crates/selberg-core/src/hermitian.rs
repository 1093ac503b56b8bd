//! Local monodromy in the `I`-basis and the Hermitian forms it preserves.
//!
//! `M_0 = diag(e(2e_j^(0)))` and `M_1 = P·diag(e(2e_j^(1)))·P⁻¹` with `P` the zero-one
//! connection matrix. A form is stored as a subspace `V` (columns are `I`-coordinates)
//! and weights `w`, so its matrix is `H = V·diag(w)·Vᵀ`.

use nalgebra::DMatrix;

use crate::connection::{connect_01, dtype_connection, Genericity, Variant};
use crate::error::{Error, Result};
use crate::integrals::{eval_sample, BasisTag, QuadratureConfig};
use crate::qkernel::{
    char_exponents, cycle_self_intersection, dtype_chart, e_half, factorial, sin_pi_c,
    ExponentChart, Singularity, C64, I,
};

/// A determinant of `P` below this modulus is treated as singular.
const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct MonodromyMatrix {
    pub base: Singularity,
    pub matrix: DMatrix<C64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormKind {
    /// `Σ w_k |I_k|²`.
    Diagonal,
    /// `Σ_(i<ρ) |I_i + I_(2ρ−i)|²/(2C_i²) + |I_ρ|²/C_ρ²` at the D-type chart.
    DType,
    /// The even-index restriction of `DType`.
    DTypeEven,
}

impl FormKind {
    pub fn name(&self) -> &'static str {
        match self {
            FormKind::Diagonal => "diagonal",
            FormKind::DType => "dtype",
            FormKind::DTypeEven => "dtype-even",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianFormSpec {
    pub kind: FormKind,
    pub basis: BasisTag,
    pub chart: ExponentChart,
    /// `(m+1) × r`; column `k` lists the `I`-coefficients of the `k`-th combination.
    pub subspace: DMatrix<C64>,
    pub weights: Vec<C64>,
}

impl HermitianFormSpec {
    /// `V·diag(w)·Vᵀ`.
    pub fn matrix(&self) -> DMatrix<C64> {
        let w = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.weights.clone()));
        &self.subspace * w * self.subspace.transpose()
    }

    pub fn restricted(&self) -> DMatrix<C64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.weights.clone()))
    }
}

fn diag(values: impl Iterator<Item = C64>) -> DMatrix<C64> {
    let v: Vec<C64> = values.collect();
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(v))
}

fn monodromy_with(
    chart: &ExponentChart,
    base: Singularity,
    genericity: Genericity,
) -> Result<MonodromyMatrix> {
    let phases = |at| {
        diag(
            char_exponents(chart, at)
                .values
                .into_iter()
                .map(|e| e_half(e * 2.0)),
        )
    };
    let matrix = match base {
        Singularity::Zero => phases(Singularity::Zero),
        Singularity::One => {
            let p = connect_01(chart, Variant::SumA, genericity)?.entries;
            let det = p.determinant();
            if det.norm() < SINGULAR_TOL {
                return Err(Error::vanishing(
                    "det P",
                    "zero-one connection matrix",
                    det.norm(),
                ));
            }
            let inv = p
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::vanishing("det P", "inverse", det.norm()))?;
            p * phases(Singularity::One) * inv
        }
        Singularity::Infinity => {
            return Err(Error::InvalidInput(
                "monodromy is built around 0 and 1".into(),
            ));
        }
    };
    Ok(MonodromyMatrix { base, matrix })
}

/// 2-norm condition number of the zero-one connection matrix, which bounds how much
/// roundoff the monodromy at 1 inherits.
pub fn connection_condition(chart: &ExponentChart) -> Result<f64> {
    let p = connect_01(chart, Variant::SumA, Genericity::Allow)?.entries;
    let sv = p.singular_values();
    Ok(sv.max() / sv.min())
}

/// Monodromy around `0` or `1` acting on `(I_0, …, I_m)`.
pub fn monodromy(chart: &ExponentChart, base: Singularity) -> Result<MonodromyMatrix> {
    monodromy_with(chart, base, Genericity::Require)
}

/// Monodromy at the D-type chart, where genericity fails by design.
pub fn dtype_monodromy(rho: usize, base: Singularity) -> Result<MonodromyMatrix> {
    monodromy_with(&dtype_chart(rho)?, base, Genericity::Allow)
}

fn s(x: C64) -> C64 {
    sin_pi_c(x)
}

/// The `k`-th weight as a single sine product:
/// `(2/i)^m/m!·Π_(j≤k) s(a+(j−1)h)s(c+(j−1)h)s(jh)/(s(a+c+(k+j−2)h)s(h))
/// ·Π_(j≤m−k) s(λ∞+(j−1)h)s(b+(j−1)h)s(jh)/(s(−a−c−(m−1)g+(m−k+j−2)h)s(h))`, `h = g/2`.
pub fn diagonal_weight_product(chart: &ExponentChart, k: usize) -> Result<C64> {
    let m = chart.m;
    if k > m {
        return Err(Error::InvalidInput(format!(
            "weight index {k} exceeds m={m}"
        )));
    }
    let ExponentChart { a, b, c, g, .. } = *chart;
    let h = g / 2.0;
    let linf = chart.lambda_inf();
    let far_shift = -a - c - g * (m as f64 - 1.0);
    let mut r = (C64::new(2.0, 0.0) / I).powi(m as i32) / factorial(m);
    let den = |x: C64, what: &str| -> Result<C64> {
        let v = s(x);
        if v.norm() < 1e-12 {
            return Err(Error::vanishing(
                format!("s({what})"),
                format!("weight k={k}"),
                v.norm(),
            ));
        }
        Ok(v)
    };
    for j in 1..=k {
        let jf = j as f64;
        r *= s(a + h * (jf - 1.0)) * s(c + h * (jf - 1.0)) * s(h * jf);
        r /= den(a + c + h * ((k + j) as f64 - 2.0), "a+c+(k+j−2)g/2")? * den(h, "g/2")?;
    }
    for j in 1..=m - k {
        let jf = j as f64;
        r *= s(linf + h * (jf - 1.0)) * s(b + h * (jf - 1.0)) * s(h * jf);
        r /= den(
            far_shift + h * ((m - k + j) as f64 - 2.0),
            "−a−c−(m−1)g+(m−k+j−2)g/2",
        )? * den(h, "g/2")?;
    }
    Ok(r)
}

/// Weights `1/(C_k•C_k)` from the self-intersection numbers.
pub fn diagonal_form(chart: &ExponentChart) -> Result<HermitianFormSpec> {
    chart.require_generic()?;
    let weights = (0..=chart.m)
        .map(|k| cycle_self_intersection(chart, k).map(|x| 1.0 / x))
        .collect::<Result<Vec<_>>>()?;
    Ok(HermitianFormSpec {
        kind: FormKind::Diagonal,
        basis: BasisTag::I,
        chart: *chart,
        subspace: DMatrix::identity(chart.m + 1, chart.m + 1),
        weights,
    })
}

/// Largest `|w_k/w̃_k − 1|` between the sine-product weights and `1/(C_k•C_k)`.
pub fn weight_agreement(chart: &ExponentChart) -> Result<f64> {
    let form = diagonal_form(chart)?;
    let mut worst: f64 = 0.0;
    for (k, w) in form.weights.iter().enumerate() {
        let p = diagonal_weight_product(chart, k)?;
        worst = worst.max((p / w - 1.0).norm());
    }
    Ok(worst)
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖M†HM − H‖/‖H‖` and `‖MᵀHM̄ − H‖/‖H‖` in the max norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceResidual {
    pub adjoint: f64,
    pub transpose: f64,
}

impl InvarianceResidual {
    /// The orientation `M†HM`, the one fixed for reporting.
    pub fn reported(&self) -> f64 {
        self.adjoint
    }
}

fn residual_pair(h: &DMatrix<C64>, m: &DMatrix<C64>) -> InvarianceResidual {
    let scale = max_abs(h);
    let adj = m.adjoint() * h * m - h;
    let tr = m.transpose() * h * m.conjugate() - h;
    InvarianceResidual {
        adjoint: max_abs(&adj) / scale,
        transpose: max_abs(&tr) / scale,
    }
}

pub fn invariance_residual(
    form: &HermitianFormSpec,
    mono: &MonodromyMatrix,
) -> Result<InvarianceResidual> {
    let h = form.matrix();
    if form.basis != BasisTag::I || h.nrows() != mono.matrix.nrows() {
        return Err(Error::InvalidInput(format!(
            "form in {:?}-basis of size {} against a monodromy of size {}",
            form.basis,
            h.nrows(),
            mono.matrix.nrows()
        )));
    }
    Ok(residual_pair(&h, &mono.matrix))
}

/// Largest distance between the eigenvalues of `M_0·M_1` and `e(−2e_j^(∞))`, matched greedily.
pub fn infinity_eigen_residual(chart: &ExponentChart) -> Result<f64> {
    let m0 = monodromy(chart, Singularity::Zero)?.matrix;
    let m1 = monodromy(chart, Singularity::One)?.matrix;
    let eig = (m0 * m1)
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::vanishing("Schur form", "M_0·M_1", 0.0))?;
    let mut targets: Vec<C64> = char_exponents(chart, Singularity::Infinity)
        .values
        .into_iter()
        .map(|e| e_half(-e * 2.0))
        .collect();
    let mut worst: f64 = 0.0;
    for ev in eig.iter() {
        let (k, d) = targets
            .iter()
            .enumerate()
            .map(|(k, t)| (k, (t - ev).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("one target per eigenvalue");
        worst = worst.max(d);
        targets.swap_remove(k);
    }
    Ok(worst)
}

/// `|tr(M_0·M_1) − Σ_j e(−2e_j^(∞))|`.
pub fn infinity_trace_residual(chart: &ExponentChart) -> Result<f64> {
    let m0 = monodromy(chart, Singularity::Zero)?.matrix;
    let m1 = monodromy(chart, Singularity::One)?.matrix;
    let want: C64 = char_exponents(chart, Singularity::Infinity)
        .values
        .into_iter()
        .map(|e| e_half(-e * 2.0))
        .sum();
    Ok(((m0 * m1).trace() - want).norm())
}

/// Index groups of the D-type subspace: pairs `(i, 2ρ−i)` and the singleton `ρ`.
fn dtype_groups(rho: usize, kind: FormKind) -> Result<Vec<Vec<usize>>> {
    let m = 2 * rho;
    match kind {
        FormKind::DType => {
            let mut g: Vec<Vec<usize>> = (0..rho).map(|i| vec![i, m - i]).collect();
            g.push(vec![rho]);
            Ok(g)
        }
        FormKind::DTypeEven => {
            let mut g: Vec<Vec<usize>> = (0..)
                .map(|i| 2 * i)
                .take_while(|&k| k < rho)
                .map(|k| vec![k, m - k])
                .collect();
            if rho.is_multiple_of(2) {
                g.push(vec![rho]);
            }
            Ok(g)
        }
        FormKind::Diagonal => Err(Error::InvalidInput(
            "the diagonal form has no D-type subspace".into(),
        )),
    }
}

/// The D-type form: combinations `I_i + I_(2ρ−i)` weighted `1/(2C_i•C_i)` and `I_ρ`
/// weighted `1/(C_ρ•C_ρ)`.
pub fn dtype_form(rho: usize, kind: FormKind) -> Result<HermitianFormSpec> {
    let chart = dtype_chart(rho)?;
    let groups = dtype_groups(rho, kind)?;
    let mut subspace = DMatrix::from_element(2 * rho + 1, groups.len(), C64::new(0.0, 0.0));
    let mut weights = Vec::with_capacity(groups.len());
    for (col, grp) in groups.iter().enumerate() {
        for &k in grp {
            subspace[(k, col)] = C64::new(1.0, 0.0);
        }
        let self_int = cycle_self_intersection(&chart, grp[0])?;
        weights.push(1.0 / (self_int * grp.len() as f64));
    }
    Ok(HermitianFormSpec {
        kind,
        basis: BasisTag::I,
        chart,
        subspace,
        weights,
    })
}

/// The single sine-product expression for `C_i²` at the D-type chart. It agrees
/// with `C_i•C_i` only for `i = 0`; the forms use `C_i•C_i`.
pub fn dtype_square_product(rho: usize, i: usize) -> Result<C64> {
    let m = 2 * rho;
    if i > m {
        return Err(Error::InvalidInput(format!("index {i} exceeds 2ρ")));
    }
    let n = (2 * (2 * rho + 1)) as f64;
    let r = |x: f64| C64::new(x, 0.0);
    let part = |len: usize| -> C64 {
        (1..=len)
            .map(|j| {
                let base = -2.0 * rho as f64 + j as f64;
                s(r((base - 2.0) / n)) * s(r(1.0 / n))
                    / (s(r((base - 1.0) / n)).powi(2) * s(r(j as f64 / n)))
            })
            .product()
    };
    Ok(factorial(m) * (I / 2.0).powi(m as i32) * part(i) * part(m - i))
}

/// `max |MV − V·R|` with `R = (VᵀV)⁻¹VᵀMV`: the part of `MV` outside the span of `V`.
pub fn subspace_leakage(m: &DMatrix<C64>, v: &DMatrix<C64>) -> Result<(f64, DMatrix<C64>)> {
    let gram = v.transpose() * v;
    let inv = gram
        .try_inverse()
        .ok_or_else(|| Error::vanishing("Gram determinant", "subspace basis", 0.0))?;
    let mv = m * v;
    let r = inv * v.transpose() * &mv;
    let leak = max_abs(&(mv - v * &r));
    Ok((leak, r))
}

/// `(leakage, restricted invariance)` of the D-type form under `M_0` and `M_1`, worst of both.
///
/// The combinations `y = VᵀI` transform as `y ↦ VᵀM I`, so closure needs `MᵀV = V·R`
/// and the restricted action on `y` is `Rᵀ`. Leakage is reported for both `MV` and `MᵀV`.
pub fn dtype_invariance_residual(rho: usize, kind: FormKind) -> Result<(f64, f64)> {
    let form = dtype_form(rho, kind)?;
    let hr = form.restricted();
    let (mut leak, mut inv): (f64, f64) = (0.0, 0.0);
    for base in [Singularity::Zero, Singularity::One] {
        let mono = dtype_monodromy(rho, base)?;
        let (l_left, _) = subspace_leakage(&mono.matrix, &form.subspace)?;
        let (l_right, r) = subspace_leakage(&mono.matrix.transpose(), &form.subspace)?;
        leak = leak.max(l_left).max(l_right);
        inv = inv.max(residual_pair(&hr, &r.transpose()).reported());
    }
    Ok((leak, inv))
}

/// Residual of the expansions of the subspace combinations in the `J`-basis:
/// `I_i + I_(2ρ−i) = Σ_j 2p_(i,2j) J_(2j)` and `I_ρ = Σ_j p_(ρ,2j) J_(2j)`; for the even
/// restriction the coefficients of `J_(2j)` and `J_(2ρ−2j)` are both taken from `p_(·,2j)`.
pub fn dtype_expansion_residual(rho: usize, kind: FormKind) -> Result<f64> {
    let p = dtype_connection(rho)?.entries;
    let m = 2 * rho;
    let mut worst: f64 = 0.0;
    for grp in dtype_groups(rho, kind)? {
        let i = grp[0];
        let mult = grp.len() as f64;
        for j in 0..=m {
            let actual: C64 = grp.iter().map(|&k| p[(k, j)]).sum();
            let predicted = if j % 2 == 1 {
                C64::new(0.0, 0.0)
            } else if kind == FormKind::DTypeEven && j > rho {
                p[(i, m - j)] * mult
            } else {
                p[(i, j)] * mult
            };
            worst = worst.max((actual - predicted).norm());
        }
    }
    Ok(worst)
}

/// `F = Σ_k w_k I_k²` at one `z ∈ (0, 1)`, evaluated from the `I` samples and from
/// the `J` samples pushed through the connection matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormSample {
    pub z: f64,
    pub from_i: f64,
    pub from_j: C64,
}

impl FormSample {
    pub fn relative_gap(&self) -> f64 {
        (self.from_j - self.from_i).norm() / self.from_i.abs()
    }

    /// `|Im F| / |F|` on the `J` side.
    pub fn imaginary_ratio(&self) -> f64 {
        self.from_j.im.abs() / self.from_j.norm()
    }
}

/// Samples `F` along `z_points`. The weights are multiplied by `i^m`, which makes them
/// real for real exponents; an overall scalar does not affect invariance. The `I`
/// values are real on `(0, 1)`, so `I_k·Ī_k = I_k²` and the `J` side is kept bilinear
/// so that its imaginary part measures the connection error.
pub fn sample_f(
    chart: &ExponentChart,
    z_points: &[f64],
    form: &HermitianFormSpec,
    cfg: &QuadratureConfig,
) -> Result<Vec<FormSample>> {
    if chart.m > 2 {
        return Err(Error::InvalidInput(format!(
            "form sampling supports m ≤ 2, got {}",
            chart.m
        )));
    }
    let h = form.matrix() * I.powi(chart.m as i32);
    let p = connect_01(chart, Variant::SumA, Genericity::Require)?.entries;
    z_points
        .iter()
        .map(|&z| {
            let iv = eval_sample(chart, z, BasisTag::I, cfg)?;
            let jv = eval_sample(chart, z, BasisTag::J, cfg)?;
            let ivec = nalgebra::DVector::from_iterator(
                iv.values.len(),
                iv.values.iter().map(|&x| C64::new(x, 0.0)),
            );
            let jvec = nalgebra::DVector::from_iterator(
                jv.values.len(),
                jv.values.iter().map(|&x| C64::new(x, 0.0)),
            );
            let pj = &p * jvec;
            let from_i = (ivec.transpose() * &h * &ivec)[(0, 0)];
            let from_j = (pj.transpose() * &h * &pj)[(0, 0)];
            Ok(FormSample {
                z,
                from_i: from_i.re,
                from_j,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic(m: usize) -> ExponentChart {
        ExponentChart::real(m, -0.31, 0.27, -0.43, 0.19).unwrap()
    }

    #[test]
    fn zero_monodromy_is_unit_diagonal() {
        let m0 = monodromy(&generic(3), Singularity::Zero).unwrap().matrix;
        for i in 0..4 {
            assert!((m0[(i, i)].norm() - 1.0).abs() < 1e-15);
        }
        let form = diagonal_form(&generic(3)).unwrap();
        let r = invariance_residual(
            &form,
            &MonodromyMatrix {
                base: Singularity::Zero,
                matrix: m0,
            },
        )
        .unwrap();
        assert!(r.adjoint < 1e-15 && r.transpose < 1e-15);
    }

    #[test]
    fn one_monodromy_has_unit_determinant() {
        let m1 = monodromy(&generic(2), Singularity::One).unwrap().matrix;
        assert!((m1.determinant().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn weights_agree_and_form_is_invariant() {
        for m in 1..=4 {
            let chart = generic(m);
            assert!(weight_agreement(&chart).unwrap() < 1e-11, "m={m}");
            let form = diagonal_form(&chart).unwrap();
            let r =
                invariance_residual(&form, &monodromy(&chart, Singularity::One).unwrap()).unwrap();
            assert!(r.reported() < 1e-10, "m={m}: {r:?}");
            assert!((r.adjoint - r.transpose).abs() < 1e-12);
        }
    }

    #[test]
    fn m1_weight_ratio() {
        // w_0/w_1 = [s(λ∞)s(b)/s(−a−c)] / [s(a)s(c)/s(a+c)]
        let chart = generic(1);
        let (a, b, c) = (chart.a, chart.b, chart.c);
        let w0 = diagonal_weight_product(&chart, 0).unwrap();
        let w1 = diagonal_weight_product(&chart, 1).unwrap();
        let want = (s(chart.lambda_inf()) * s(b) / s(-a - c)) / (s(a) * s(c) / s(a + c));
        assert!((w0 / w1 - want).norm() < 1e-13);
    }

    #[test]
    fn weights_real_for_even_m() {
        let form = diagonal_form(&generic(2)).unwrap();
        assert!(form.weights.iter().all(|w| w.im.abs() < 1e-14 * w.norm()));
        let odd = diagonal_form(&generic(3)).unwrap();
        assert!(odd.weights.iter().all(|w| w.re.abs() < 1e-14 * w.norm()));
    }

    #[test]
    fn trace_and_eigenvalues_at_infinity() {
        for m in 1..=3 {
            let chart = generic(m);
            assert!(infinity_trace_residual(&chart).unwrap() < 1e-9);
            assert!(infinity_eigen_residual(&chart).unwrap() < 1e-8, "m={m}");
        }
    }

    #[test]
    fn dtype_rho1_zero_monodromy_doubles_eigenvalue() {
        let m0 = dtype_monodromy(1, Singularity::Zero).unwrap().matrix;
        assert!((m0[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((m0[(2, 2)] - C64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn dtype_forms_are_invariant() {
        for rho in 1..=3 {
            for kind in [FormKind::DType, FormKind::DTypeEven] {
                let (leak, inv) = dtype_invariance_residual(rho, kind).unwrap();
                assert!(leak < 1e-9 && inv < 1e-9, "ρ={rho} {kind:?}: {leak} {inv}");
                assert!(dtype_expansion_residual(rho, kind).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn rank_one_submodule_at_rho1() {
        let m1 = dtype_monodromy(1, Singularity::One).unwrap().matrix;
        let v = DMatrix::from_column_slice(
            3,
            1,
            &[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        );
        assert!(subspace_leakage(&m1, &v).unwrap().0 < 1e-12);
    }

    #[test]
    fn square_product_matches_self_intersection_only_at_zero() {
        let chart = dtype_chart(2).unwrap();
        let c0 = cycle_self_intersection(&chart, 0).unwrap();
        assert!((dtype_square_product(2, 0).unwrap() / c0 - 1.0).norm() < 1e-12);
        let c1 = cycle_self_intersection(&chart, 1).unwrap();
        assert!((dtype_square_product(2, 1).unwrap() / c1 - 1.0).norm() > 1e-3);
    }
}
