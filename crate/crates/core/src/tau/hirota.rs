use crate::evolve::{ClassicalConfig, ClassicalSymbols};
use crate::ncalg::{GenId, NCPoly};

use super::engine::{tau_direct, ClassicalSetup, Param};

/// `d_t tau_n d_tb tau_n - tau_n d_t d_tb tau_n - sign tau_{n+1} tau_{n-1}`.
///
/// `taus[k]` is `tau_k` with `taus[0] = 1`.
pub fn hirota_residual(taus: &[NCPoly], n: usize, t1: GenId, tb1: GenId, sign: i64) -> NCPoly {
    let tau = &taus[n];
    let d = |f: &NCPoly, g: GenId| f.derivative(g).expect("commuting times");
    let dt = d(tau, t1);
    let dtb = d(tau, tb1);
    let dd = d(&dt, tb1);
    let bilinear = &(&dt * &dtb) - &(tau * &dd);
    let shifted = (&taus[n + 1] * &taus[n - 1]).scale_rational(&num::BigRational::from_integer(sign.into()));
    &bilinear - &shifted
}

/// Global sign of the shifted term, fixed on `N = 2` with a fully symbolic group element.
///
/// Returns `None` if neither sign gives a zero residual.
pub fn hirota_sign() -> Option<i64> {
    let mut cfg = ClassicalConfig::new(2);
    cfg.symbolic_g = true;
    let sym = ClassicalSymbols::new(cfg);
    let g = sym.symbolic_g().expect("symbolic g requested");
    let setup = ClassicalSetup::new(&sym, Param::B, 0, &g);
    let taus: Vec<NCPoly> = (0..=2).map(|k| tau_direct(&setup, k)).collect();
    [1, -1].into_iter().find(|&s| hirota_residual(&taus, 1, sym.t[0][0], sym.tbar[0][0], s).is_zero())
}
