//! From a Hermitian coupling matrix `E` to the Itô matrix `G`, its derived
//! model/Galilean/dressing matrices, and the Hudson-Parthasarathy triple
//! `(S, L, H)`.
//!
//! The triple is read off the blocks of `G`,
//!
//! ```text
//!     G = ( -½L†L - iH   -L†S  )
//!         (     L        S - 1 )
//! ```
//!
//! and [`closed_form_triple`] evaluates the explicit resolvent formulas as an
//! independent cross-check. A gauge `Z` (Hermitian on the channel block)
//! replaces the symmetric weight `½Π` by `½Π + iZ` in the dressing factor.

use crate::linalg::{
    self, cayley, BlockOperatorMatrix, ComplexMatrix, LinalgError, C64, HERMITICITY_TOL, I,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SlhError {
    #[error("coupling matrix is not Hermitian: |E_{{{row}{col}}} - E_{{{col}{row}}}†| reaches {max_asymmetry:e}")]
    NonHermitian {
        max_asymmetry: f64,
        /// Channel labels `(α, β)` of the worst block.
        row: usize,
        col: usize,
    },
    #[error("gauge matrix is not Hermitian: max |Z - Z†| = {0:e}")]
    NonHermitianGauge(f64),
    #[error("gauge matrix must be {expected}x{expected}, got {rows}x{cols}")]
    GaugeSize {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("dressing factor is singular: {0}")]
    SingularDressing(LinalgError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, SlhError>;

/// `Im X = (X - X†)/(2i)`, Hermitian for any square `X`.
pub fn operator_im(x: &ComplexMatrix) -> ComplexMatrix {
    (x - &x.adjoint()).scale(C64::new(0.0, -0.5))
}

/// A validated Hermitian coupling matrix `(E_{αβ})` with `E_{αβ}† = E_{βα}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingMatrix {
    e: BlockOperatorMatrix,
    herm_tol: f64,
}

impl CouplingMatrix {
    pub fn blocks(&self) -> &BlockOperatorMatrix {
        &self.e
    }

    pub fn full(&self) -> &ComplexMatrix {
        self.e.full()
    }

    pub fn m(&self) -> usize {
        self.e.m()
    }

    pub fn n(&self) -> usize {
        self.e.n()
    }

    pub fn hermiticity_tol(&self) -> f64 {
        self.herm_tol
    }

    pub fn zero(m: usize, n: usize) -> Self {
        Self {
            e: linalg::partition(&ComplexMatrix::zeros((1 + n) * m, (1 + n) * m), m, n)
                .expect("shape is consistent"),
            herm_tol: HERMITICITY_TOL,
        }
    }
}

pub fn validate_coupling(raw: &ComplexMatrix, m: usize, n: usize) -> Result<CouplingMatrix> {
    validate_coupling_with_tol(raw, m, n, HERMITICITY_TOL)
}

/// Checks shape and hermiticity (relative to the largest entry) of `raw`.
/// On failure the error names the block `E_{αβ}` with the largest asymmetry.
pub fn validate_coupling_with_tol(
    raw: &ComplexMatrix,
    m: usize,
    n: usize,
    herm_tol: f64,
) -> Result<CouplingMatrix> {
    let e = linalg::partition(raw, m, n)?;
    let bound = herm_tol * raw.max_abs();
    let mut worst = (0.0f64, 0, 0);
    for r in 0..raw.rows() {
        for c in r..raw.cols() {
            let d = (raw[(r, c)] - raw[(c, r)].conj()).norm();
            if d > worst.0 {
                worst = (d, r / m, c / m);
            }
        }
    }
    if worst.0 > bound {
        return Err(SlhError::NonHermitian {
            max_asymmetry: worst.0,
            row: worst.1,
            col: worst.2,
        });
    }
    Ok(CouplingMatrix { e, herm_tol })
}

/// Hermitian gauge matrix `Z_ℓℓ` acting on `K ⊗ h`; zero on the system block.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeMatrix {
    z: ComplexMatrix,
}

impl GaugeMatrix {
    pub fn new(z: ComplexMatrix) -> Result<Self> {
        Self::with_tol(z, HERMITICITY_TOL)
    }

    pub fn with_tol(z: ComplexMatrix, herm_tol: f64) -> Result<Self> {
        if !z.is_square() {
            return Err(SlhError::GaugeSize {
                expected: z.rows(),
                rows: z.rows(),
                cols: z.cols(),
            });
        }
        let defect = z.hermiticity_defect();
        if defect > herm_tol * z.max_abs() {
            return Err(SlhError::NonHermitianGauge(defect));
        }
        Ok(Self { z })
    }

    pub fn zero(nm: usize) -> Self {
        Self {
            z: ComplexMatrix::zeros(nm, nm),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.z
    }
}

/// Complex damping `κ± = ½ ± iσ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarGauge {
    pub sigma: f64,
}

impl ScalarGauge {
    pub fn new(sigma: f64) -> Self {
        Self { sigma }
    }

    pub fn kappa_plus(&self) -> C64 {
        C64::new(0.5, self.sigma)
    }

    pub fn kappa_minus(&self) -> C64 {
        C64::new(0.5, -self.sigma)
    }

    /// `Z = σ·1` on the `nm`-dimensional channel block.
    pub fn to_matrix(&self, nm: usize) -> GaugeMatrix {
        GaugeMatrix {
            z: ComplexMatrix::identity(nm).scale(C64::new(self.sigma, 0.0)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gauge {
    Matrix(GaugeMatrix),
    Scalar(ScalarGauge),
}

impl Gauge {
    pub fn to_matrix(&self, nm: usize) -> Result<GaugeMatrix> {
        match self {
            Gauge::Matrix(z) => {
                if z.z.rows() != nm {
                    return Err(SlhError::GaugeSize {
                        expected: nm,
                        rows: z.z.rows(),
                        cols: z.z.cols(),
                    });
                }
                Ok(z.clone())
            }
            Gauge::Scalar(s) => Ok(s.to_matrix(nm)),
        }
    }
}

/// `½Π + iZ` as a full matrix on `(C ⊕ K) ⊗ h`.
fn weight(m: usize, n: usize, z: Option<&GaugeMatrix>) -> Result<ComplexMatrix> {
    let half_pi = BlockOperatorMatrix::channel_projector(m, n)
        .into_full()
        .scale(C64::new(0.5, 0.0));
    match z {
        None => Ok(half_pi),
        Some(z) => {
            if z.z.rows() != n * m {
                return Err(SlhError::GaugeSize {
                    expected: n * m,
                    rows: z.z.rows(),
                    cols: z.z.cols(),
                });
            }
            let iz = BlockOperatorMatrix::channel_embedding(m, &z.z.scale(I))?.into_full();
            Ok(&half_pi + &iz)
        }
    }
}

/// `-i (1 + iEW)^{-1} E` for an arbitrary weight `W`, without validation.
pub(crate) fn dressed_ito(e: &ComplexMatrix, w: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = e.rows();
    let dressing = &ComplexMatrix::identity(dim) + &(e * w).scale(I);
    let inv = dressing.inverse().map_err(SlhError::SingularDressing)?;
    Ok((&inv * e).scale(-I))
}

/// Itô matrix `G = -i(1 + (i/2)EΠ)^{-1}E`, or with a gauge
/// `G(E, Z) = -i(1 + iE(½Π + iZ))^{-1}E`.
pub fn ito_matrix(e: &CouplingMatrix, z: Option<&GaugeMatrix>) -> Result<BlockOperatorMatrix> {
    let w = weight(e.m(), e.n(), z)?;
    let g = dressed_ito(e.full(), &w)?;
    Ok(linalg::partition(&g, e.m(), e.n())?)
}

/// Model `V = G + Π`, Galilean `M = 1 + ΠG` and dressing `F = 1 + ½ΠG`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedMatrices {
    pub v: BlockOperatorMatrix,
    pub m: BlockOperatorMatrix,
    pub f: BlockOperatorMatrix,
}

pub fn derived_matrices(g: &BlockOperatorMatrix) -> DerivedMatrices {
    let (m, n) = (g.m(), g.n());
    let pi = BlockOperatorMatrix::channel_projector(m, n).into_full();
    let one = ComplexMatrix::identity(g.dim());
    let pi_g = &pi * g.full();
    let part = |x: ComplexMatrix| linalg::partition(&x, m, n).expect("same shape as G");
    DerivedMatrices {
        v: part(g.full() + &pi),
        m: part(&one + &pi_g),
        f: part(&one + &pi_g.scale(C64::new(0.5, 0.0))),
    }
}

/// Everything derived from one `(E, gauge)` pair.
#[derive(Clone, Debug)]
pub struct SlhResult {
    pub coupling: CouplingMatrix,
    pub gauge: Option<Gauge>,
    pub g: BlockOperatorMatrix,
    pub v: BlockOperatorMatrix,
    pub m: BlockOperatorMatrix,
    pub f: BlockOperatorMatrix,
    /// Scattering matrix, `nm × nm`.
    pub s: ComplexMatrix,
    /// Coupling column, `nm × m`.
    pub l: ComplexMatrix,
    /// Effective Hamiltonian, `m × m`.
    pub h: ComplexMatrix,
}

pub fn slh_triple(e: &CouplingMatrix, gauge: Option<&Gauge>) -> Result<SlhResult> {
    let z = gauge.map(|g| g.to_matrix(e.n() * e.m())).transpose()?;
    let g = ito_matrix(e, z.as_ref())?;
    let DerivedMatrices { v, m, f } = derived_matrices(&g);

    let s = &g.xll() + &ComplexMatrix::identity(e.n() * e.m());
    let l = g.xl0();
    let ldl = &l.adjoint() * &l;
    // G₀₀ = -½L†L - iH
    let h = (&g.x00() + &ldl.scale(C64::new(0.5, 0.0))).scale(I);

    Ok(SlhResult {
        coupling: e.clone(),
        gauge: gauge.cloned(),
        g,
        v,
        m,
        f,
        s,
        l,
        h,
    })
}

/// Residuals of the algebraic identities satisfied by an [`SlhResult`].
/// The `Option` fields only hold without a gauge.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityResiduals {
    /// `G + G† + G†ΠG = 0`
    pub ito_isometry: f64,
    pub s_unitarity: f64,
    pub h_hermiticity: f64,
    /// Rebuilding `G` from `(S, L, H)`.
    pub recomposition: f64,
    /// `V = G + Π`, `M = 1 + ΠG`, `F = 1 + ½ΠG`.
    pub derived: f64,
    /// `V₀· = G₀·`; compared exactly.
    pub v_first_row: f64,
    /// `G = -iEF`
    pub g_minus_i_e_f: Option<f64>,
    /// `F(1 + (i/2)ΠE) = 1`
    pub dressing_inverse: Option<f64>,
    /// `½E(1 + M) = iG`
    pub half_e_one_plus_m: Option<f64>,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        [
            self.ito_isometry,
            self.s_unitarity,
            self.h_hermiticity,
            self.recomposition,
            self.derived,
            self.v_first_row,
        ]
        .into_iter()
        .chain(self.g_minus_i_e_f)
        .chain(self.dressing_inverse)
        .chain(self.half_e_one_plus_m)
        .fold(0.0, f64::max)
    }
}

impl SlhResult {
    pub fn is_gauged(&self) -> bool {
        self.gauge.is_some()
    }

    /// `G` rebuilt from the extracted `(S, L, H)`.
    pub fn recompose_g(&self) -> ComplexMatrix {
        let ldl = &self.l.adjoint() * &self.l;
        let g00 = &ldl.scale(C64::new(-0.5, 0.0)) - &self.h.scale(I);
        let g0l = -&(&self.l.adjoint() * &self.s);
        let gll = &self.s - &ComplexMatrix::identity(self.s.rows());
        BlockOperatorMatrix::from_blocks(&g00, &g0l, &self.l, &gll)
            .expect("blocks come from G")
            .into_full()
    }

    pub fn ito_isometry_residual(&self) -> f64 {
        ito_isometry_residual(&self.g)
    }

    pub fn residuals(&self) -> IdentityResiduals {
        let (m, n) = (self.coupling.m(), self.coupling.n());
        let dim = (1 + n) * m;
        let g = self.g.full();
        let e = self.coupling.full();
        let one = ComplexMatrix::identity(dim);
        let pi = BlockOperatorMatrix::channel_projector(m, n).into_full();
        let half = C64::new(0.5, 0.0);

        let derived = {
            let pi_g = &pi * g;
            let v = g + &pi;
            let mm = &one + &pi_g;
            let f = &one + &pi_g.scale(half);
            v.max_diff(self.v.full())
                .max(mm.max_diff(self.m.full()))
                .max(f.max_diff(self.f.full()))
        };
        let v_first_row = (0..m)
            .flat_map(|r| (0..dim).map(move |c| (r, c)))
            .map(|(r, c)| (self.v.full()[(r, c)] - g[(r, c)]).norm())
            .fold(0.0, f64::max);

        let (g_minus_i_e_f, dressing_inverse, half_e_one_plus_m) = if self.is_gauged() {
            (None, None, None)
        } else {
            let f = self.f.full();
            let r1 = g.max_diff(&(e * f).scale(-I));
            let r2 = (f * &(&one + &(&pi * e).scale(C64::new(0.0, 0.5)))).identity_defect();
            let r3 = (e * &(&one + self.m.full()))
                .scale(half)
                .max_diff(&g.scale(I));
            (Some(r1), Some(r2), Some(r3))
        };

        IdentityResiduals {
            ito_isometry: self.ito_isometry_residual(),
            s_unitarity: self.s.unitarity_defect(),
            h_hermiticity: self.h.hermiticity_defect(),
            recomposition: self.recompose_g().max_diff(g),
            derived,
            v_first_row,
            g_minus_i_e_f,
            dressing_inverse,
            half_e_one_plus_m,
        }
    }
}

/// `max |G + G† + G†ΠG|`.
pub fn ito_isometry_residual(g: &BlockOperatorMatrix) -> f64 {
    let pi = BlockOperatorMatrix::channel_projector(g.m(), g.n()).into_full();
    let gd = g.full().adjoint();
    let sum = &(g.full() + &gd) + &(&gd * &(&pi * g.full()));
    sum.max_abs()
}

/// The explicit resolvent formulas for a scalar gauge `σ` (`σ = 0` is the
/// symmetric case):
///
/// ```text
/// S = (1 - iκ₋Eℓℓ)(1 + iκ₊Eℓℓ)^{-1}
/// L = -i(1 + iκ₊Eℓℓ)^{-1} Eℓ₀
/// H = E₀₀ + Im{E₀ℓ κ₊ (1 + iκ₊Eℓℓ)^{-1} Eℓ₀}
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormTriple {
    pub s: ComplexMatrix,
    pub l: ComplexMatrix,
    pub h: ComplexMatrix,
}

pub fn closed_form_triple(e: &CouplingMatrix, sigma: f64) -> Result<ClosedFormTriple> {
    let gauge = ScalarGauge::new(sigma);
    let (kp, km) = (gauge.kappa_plus(), gauge.kappa_minus());
    let b = e.blocks();
    let ell = b.xll();
    let one = ComplexMatrix::identity(ell.rows());
    let resolvent = (&one + &ell.scale(I * kp))
        .inverse()
        .map_err(SlhError::SingularDressing)?;
    let s = &(&one - &ell.scale(I * km)) * &resolvent;
    let l = (&resolvent * &b.xl0()).scale(-I);
    let inner = (&b.x0l() * &(&resolvent * &b.xl0())).scale(kp);
    let h = &b.x00() + &operator_im(&inner);
    Ok(ClosedFormTriple { s, l, h })
}

/// Residuals for the consistency of the gauged family with the symmetric
/// case.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeReductionReport {
    /// `|G(E, Z = 0) - G(E)|`
    pub zero_gauge: f64,
    /// Per `σ`: worst deviation of `(S, L, H)` from [`closed_form_triple`].
    pub scalar_gauge: Vec<(f64, f64)>,
}

impl GaugeReductionReport {
    pub fn max(&self) -> f64 {
        self.scalar_gauge
            .iter()
            .map(|&(_, r)| r)
            .fold(self.zero_gauge, f64::max)
    }
}

pub fn gauge_reduction_check(e: &CouplingMatrix, sigmas: &[f64]) -> Result<GaugeReductionReport> {
    let nm = e.n() * e.m();
    let plain = ito_matrix(e, None)?;
    let zeroed = ito_matrix(e, Some(&GaugeMatrix::zero(nm)))?;
    let zero_gauge = plain.full().max_diff(zeroed.full());

    let scalar_gauge = sigmas
        .iter()
        .map(|&sigma| {
            let res = slh_triple(e, Some(&Gauge::Scalar(ScalarGauge::new(sigma))))?;
            let closed = closed_form_triple(e, sigma)?;
            let r = res
                .s
                .max_diff(&closed.s)
                .max(res.l.max_diff(&closed.l))
                .max(res.h.max_diff(&closed.h));
            Ok((sigma, r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GaugeReductionReport {
        zero_gauge,
        scalar_gauge,
    })
}

/// Scalar shortcut: `S` for a single channel with `Eℓℓ = e` through the
/// matrix pipeline; used to compare with [`cayley`].
pub fn scalar_scattering(e: f64) -> Result<C64> {
    let raw = ComplexMatrix::diag(&[C64::new(0.0, 0.0), C64::new(e, 0.0)]);
    let res = slh_triple(&validate_coupling(&raw, 1, 1)?, None)?;
    Ok(res.s[(0, 0)])
}

/// `cayley(Eℓℓ, ½)`, the symmetric-gauge scattering matrix.
pub fn cayley_scattering(e: &CouplingMatrix) -> Result<ComplexMatrix> {
    Ok(cayley(&e.blocks().xll(), 0.5)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ONE, ZERO};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn coupling(rows: &[Vec<C64>], m: usize, n: usize) -> CouplingMatrix {
        validate_coupling(&ComplexMatrix::from_rows(rows).unwrap(), m, n).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate_coupling(&ComplexMatrix::zeros(2, 2), 1, 1).is_ok());
        assert!(validate_coupling(
            &ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap(),
            1,
            1
        )
        .is_ok());
        let bad = ComplexMatrix::from_rows(&[vec![ZERO, I], vec![I, ZERO]]).unwrap();
        match validate_coupling(&bad, 1, 1) {
            Err(SlhError::NonHermitian {
                max_asymmetry,
                row,
                col,
            }) => {
                assert_eq!((row, col), (0, 1));
                assert!((max_asymmetry - 2.0).abs() < 1e-15);
            }
            other => panic!("expected NonHermitian, got {other:?}"),
        }
        assert!(matches!(
            validate_coupling(&ComplexMatrix::zeros(3, 3), 1, 1),
            Err(SlhError::Linalg(LinalgError::SizeMismatch { .. }))
        ));
    }

    #[test]
    fn zero_coupling_gives_trivial_triple() {
        let e = CouplingMatrix::zero(2, 2);
        let res = slh_triple(&e, None).unwrap();
        assert_eq!(res.g.full().max_abs(), 0.0);
        assert_eq!(res.s, ComplexMatrix::identity(4));
        assert_eq!(res.l.max_abs(), 0.0);
        assert_eq!(res.h.max_abs(), 0.0);
        let d = derived_matrices(&res.g);
        assert_eq!(d.v, BlockOperatorMatrix::channel_projector(2, 2));
        assert_eq!(d.m, BlockOperatorMatrix::identity(2, 2));
        assert_eq!(d.f, BlockOperatorMatrix::identity(2, 2));
    }

    #[test]
    fn diagonal_coupling_two() {
        // -2i/(1+i) = -2i(1-i)/2 = -1 - i
        let oracle = c(0.0, -2.0) / c(1.0, 1.0);
        assert!((oracle - c(-1.0, -1.0)).norm() < 1e-15);

        let e = coupling(&[vec![ZERO, ZERO], vec![ZERO, c(2.0, 0.0)]], 1, 1);
        let res = slh_triple(&e, None).unwrap();
        assert!((res.g.full()[(1, 1)] - oracle).norm() < 1e-15);
        assert_eq!(res.g.full()[(0, 0)], ZERO);
        assert!((res.s[(0, 0)] - c(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(res.l.max_abs(), 0.0);
        assert!((res.m.full()[(1, 1)] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((res.f.full()[(1, 1)] - c(0.5, -0.5)).norm() < 1e-15);
        assert_eq!(res.m.full()[(0, 0)], ONE);
        assert_eq!(res.f.full()[(0, 0)], ONE);
    }

    #[test]
    fn scalar_gauge_matches_scalar_algebra() {
        for (e, z) in [(1.0, 0.3), (-2.0, 1.0), (0.7, -0.4)] {
            let cm = coupling(&[vec![ZERO, ZERO], vec![ZERO, c(e, 0.0)]], 1, 1);
            let zm = GaugeMatrix::new(ComplexMatrix::scalar(c(z, 0.0))).unwrap();
            let g = ito_matrix(&cm, Some(&zm)).unwrap();
            let den = c(1.0 - e * z, e / 2.0);
            let gll = c(0.0, -e) / den;
            assert!((g.full()[(1, 1)] - gll).norm() < 1e-14);
            let s = ONE + g.full()[(1, 1)];
            let s_oracle = c(1.0 - e * z, -e / 2.0) / den;
            assert!((s - s_oracle).norm() < 1e-14);
            assert!((s.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn direct_coupling_without_scattering() {
        let h0 = 0.7;
        let cc = c(0.3, -1.1);
        let e = coupling(&[vec![c(h0, 0.0), cc.conj()], vec![cc, ZERO]], 1, 1);
        let res = slh_triple(&e, None).unwrap();
        assert!((res.s[(0, 0)] - ONE).norm() < 1e-15);
        assert!((res.l[(0, 0)] - (-I * cc)).norm() < 1e-15);
        assert!((res.h[(0, 0)] - c(h0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn scalar_gauge_triple_matches_kappa_formulas() {
        let sigma = 0.3;
        let (kp, km) = (c(0.5, sigma), c(0.5, -sigma));
        let (h0, cc, e11) = (0.2, c(0.4, 0.9), 1.3);
        let e = coupling(&[vec![c(h0, 0.0), cc.conj()], vec![cc, c(e11, 0.0)]], 1, 1);
        let res = slh_triple(&e, Some(&Gauge::Scalar(ScalarGauge::new(sigma)))).unwrap();
        let den = ONE + I * kp * e11;
        let s = (ONE - I * km * e11) / den;
        let l = -I / den * cc;
        let h = h0 + (cc.conj() * kp / den * cc).im;
        assert!((res.s[(0, 0)] - s).norm() < 1e-14);
        assert!((res.l[(0, 0)] - l).norm() < 1e-14);
        assert!((res.h[(0, 0)] - c(h, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn gauge_reduction_on_zero_and_scalar() {
        let rep = gauge_reduction_check(&CouplingMatrix::zero(1, 1), &[0.0, 0.3]).unwrap();
        assert_eq!(rep.max(), 0.0);

        let e = coupling(&[vec![ZERO, ZERO], vec![ZERO, ONE]], 1, 1);
        let rep = gauge_reduction_check(&e, &[0.3]).unwrap();
        assert!(rep.max() < 1e-15);
        let s = slh_triple(&e, Some(&Gauge::Scalar(ScalarGauge::new(0.3))))
            .unwrap()
            .s[(0, 0)];
        let oracle = (ONE - I * c(0.5, -0.3)) / (ONE + I * c(0.5, 0.3));
        assert!((s - oracle).norm() < 1e-15);
    }

    #[test]
    fn derived_definitional_identities() {
        let e = coupling(
            &[vec![c(0.1, 0.0), c(0.2, 0.3)], vec![c(0.2, -0.3), c(-0.8, 0.0)]],
            1,
            1,
        );
        let g = ito_matrix(&e, None).unwrap();
        let d = derived_matrices(&g);
        let pi = BlockOperatorMatrix::channel_projector(1, 1).into_full();
        let one = ComplexMatrix::identity(2);
        assert_eq!(&pi * &(d.v.full() - g.full()), pi);
        assert_eq!((&(&one - &pi) * &(d.m.full() - &one)).max_abs(), 0.0);
    }

    #[test]
    fn singular_dressing_surfaces_as_error() {
        // Not reachable from Hermitian data; forced with a non-Hermitian E.
        let e = ComplexMatrix::from_rows(&[vec![ZERO, ZERO], vec![ZERO, c(0.0, 2.0)]]).unwrap();
        let w = BlockOperatorMatrix::channel_projector(1, 1)
            .into_full()
            .scale(c(0.5, 0.0));
        assert!(matches!(
            dressed_ito(&e, &w),
            Err(SlhError::SingularDressing(_))
        ));
    }

    #[test]
    fn operator_im_is_hermitian_and_matches_scalar_im() {
        let x = ComplexMatrix::scalar(c(0.3, -0.8));
        assert!((operator_im(&x)[(0, 0)] - c(-0.8, 0.0)).norm() < 1e-16);
        let y = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(0.0, 1.0)], vec![c(3.0, 0.0), I]])
            .unwrap();
        assert!(operator_im(&y).hermiticity_defect() < 1e-16);
    }
}
