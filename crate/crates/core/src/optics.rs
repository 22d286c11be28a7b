//! Fresnel optics of the prism–vapor interface.

use num_complex::Complex64;

use crate::model::PrismGeometry;

/// Complex refractive index of the vapor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexRefraction {
    pub n2: Complex64,
}

impl ComplexRefraction {
    pub fn real(n: f64) -> Self {
        Self { n2: Complex64::new(n, 0.0) }
    }
}

/// n₂ = √(1 + χ) on the principal branch.
pub fn refractive_index_from_chi(chi: Complex64) -> ComplexRefraction {
    ComplexRefraction { n2: (Complex64::new(1.0, 0.0) + chi).sqrt() }
}

/// √(n₂² − n₁² sin²θ_i) on the branch with non-negative imaginary part, so the
/// transmitted field decays into the vapor.
fn transmitted_normal(geom: &PrismGeometry, n2: Complex64) -> Complex64 {
    let s = geom.n1() * geom.theta_i().sin();
    let root = (n2 * n2 - s * s).sqrt();
    if root.im < 0.0 {
        -root
    } else {
        root
    }
}

/// TM amplitude reflection coefficient r_p.
pub fn fresnel_rp(geom: &PrismGeometry, n2: ComplexRefraction) -> Complex64 {
    let n1 = geom.n1();
    let incident = Complex64::new(n1 * geom.theta_i().cos(), 0.0);
    let ratio = Complex64::new(n1, 0.0) / n2.n2;
    let transmitted = ratio * ratio * transmitted_normal(geom, n2.n2);
    (incident - transmitted) / (incident + transmitted)
}

/// TM reflectivity R_p = |r_p|².
pub fn fresnel_reflectivity(geom: &PrismGeometry, n2: ComplexRefraction) -> f64 {
    fresnel_rp(geom, n2).norm_sqr()
}

/// Reflectivity seen by the probe for a vapor of susceptibility `chi`.
pub fn reflectivity_from_chi(geom: &PrismGeometry, chi: Complex64) -> f64 {
    fresnel_reflectivity(geom, refractive_index_from_chi(chi))
}
