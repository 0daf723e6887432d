//! Norms, residuals, expected orders and the ε-sweep study that compares them.

pub mod norms;
pub mod orders;
pub mod residual;
pub mod study;

pub use norms::{
    full_plane_component_l2, full_plane_l2, layer_l2, sample_norms, sup_norm, Norms, SUP_REFINEMENTS, TAIL_FRACTION,
};
pub use residual::{
    boundary_residual, boundary_row, fd_convergence, fd_residual, pde_residual, refined_boundary_residual, remainder,
    FdConvergence, ResidualReport, Steps,
};
pub use study::{
    asymptotic_sweep, census_sweep, default_matrix, report_csv, report_text, root_census, run_matrix, Census,
    CensusPoint, ReportRow, RowKind, Study, StudyConfig, SweepPoint,
};

/// `√((ν+κ)t) e^{max(ν,κ)t}`, the growth bound for the distance to the weak solution.
pub fn stability_bound(t: f64, nu: f64, kappa: f64) -> f64 {
    ((nu + kappa) * t).sqrt() * (nu.max(kappa) * t).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setup::{viscosity_diffusivity, RegimeCase, RegimeParams};

    #[test]
    fn stability_bound_values() {
        assert_eq!(stability_bound(0.0, 1e-3, 1e-4), 0.0);
        let ts = [0.0, 0.5, 1.0, 10.0, 1e3];
        assert!(ts.windows(2).all(|w| stability_bound(w[1], 1e-3, 1e-2) > stability_bound(w[0], 1e-3, 1e-2)));
        let p = RegimeParams::standard(RegimeCase::Case2, 8.0).unwrap();
        let (nu, kappa) = viscosity_diffusivity(&p, 0.1).unwrap();
        let expect = (1e-6f64 + 1e-8).sqrt() * (1e-6f64).exp();
        assert!((stability_bound(1.0, nu, kappa) / expect - 1.0).abs() < 1e-12);
        assert!((stability_bound(1.0, nu, kappa) - 1.005e-3).abs() < 1e-6);
    }
}
