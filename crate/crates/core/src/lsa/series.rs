//! Taylor coefficients of the interference function `nu` around a flat
//! power delay profile.
//!
//! With `t = ln(pdp_ratio)`, each branch is `sum_j c_j(alpha, beta) t^j` and
//! each `c_j` is a sum of monomials `coef * alpha^pa * beta^pb`. The tables
//! were generated by symbolic expansion of the closed forms (branch IV in its
//! corrected form, see [`super::nu_branch_iv_printed`]).

/// `(coefficient, power of alpha, power of beta)`.
pub(super) type Term = (f64, i32, i32);

pub(super) const SERIES_I: [&[Term]; 6] = [
    &[(1.0, 0, 0), (1.0, 0, -1), (1.0 / 2.0, 2, -2), (-2.0, 1, -1)],
    &[(1.0 / 2.0, 0, 0), (-1.0 / 2.0, 0, -1), (1.0 / 6.0, 2, -1)],
    &[
        (-1.0 / 4.0, 0, 0),
        (1.0 / 6.0, 0, -1),
        (1.0 / 12.0, 0, 1),
        (5.0 / 24.0, 2, 0),
        (-1.0 / 6.0, 1, 1),
        (-1.0 / 6.0, 3, -1),
        (1.0 / 40.0, 4, -2),
    ],
    &[
        (1.0 / 12.0, 0, 0),
        (-1.0 / 24.0, 0, 1),
        (-1.0 / 24.0, 0, -1),
        (1.0 / 72.0, 2, 1),
        (1.0 / 120.0, 4, -1),
    ],
    &[
        (-1.0 / 48.0, 0, 0),
        (-1.0 / 720.0, 0, 3),
        (1.0 / 72.0, 0, 1),
        (1.0 / 96.0, 4, 0),
        (1.0 / 120.0, 0, -1),
        (-1.0 / 72.0, 3, 1),
        (-1.0 / 180.0, 5, -1),
        (1.0 / 360.0, 1, 3),
        (1.0 / 480.0, 2, 2),
        (1.0 / 1680.0, 6, -2),
    ],
    &[
        (1.0 / 240.0, 0, 0),
        (-1.0 / 288.0, 0, 1),
        (-1.0 / 720.0, 0, -1),
        (1.0 / 1440.0, 0, 3),
        (-1.0 / 4320.0, 2, 3),
        (1.0 / 1440.0, 4, 1),
        (1.0 / 5040.0, 6, -1),
    ],
];
pub(super) const SERIES_II: [&[Term]; 6] = [
    &[
        (-1.0 / 2.0, 0, 0),
        (1.0, 0, -1),
        (1.0 / 2.0, -1, 1),
        (-1.0 / 2.0, 1, -1),
    ],
    &[(1.0 / 2.0, 0, 0), (-1.0 / 2.0, 0, -1), (1.0 / 6.0, 2, -1)],
    &[
        (-1.0 / 4.0, 0, 0),
        (1.0 / 6.0, 0, -1),
        (1.0 / 12.0, 0, 1),
        (-1.0 / 24.0, 1, 1),
        (-1.0 / 24.0, 3, -1),
        (-1.0 / 60.0, -1, 3),
    ],
    &[
        (1.0 / 12.0, 0, 0),
        (-1.0 / 24.0, 0, 1),
        (-1.0 / 24.0, 0, -1),
        (1.0 / 72.0, 2, 1),
        (1.0 / 120.0, 4, -1),
    ],
    &[
        (-1.0 / 48.0, 0, 0),
        (-1.0 / 720.0, 0, 3),
        (1.0 / 72.0, 0, 1),
        (1.0 / 120.0, 0, -1),
        (-1.0 / 288.0, 3, 1),
        (-1.0 / 720.0, 5, -1),
        (1.0 / 1440.0, 1, 3),
        (1.0 / 1680.0, -1, 5),
    ],
    &[
        (1.0 / 240.0, 0, 0),
        (-1.0 / 288.0, 0, 1),
        (-1.0 / 720.0, 0, -1),
        (1.0 / 1440.0, 0, 3),
        (-1.0 / 4320.0, 2, 3),
        (1.0 / 1440.0, 4, 1),
        (1.0 / 5040.0, 6, -1),
    ],
];
pub(super) const SERIES_III: [&[Term]; 6] = [
    &[
        (3.0 / 2.0, 0, 0),
        (1.0 / 2.0, 0, -2),
        (-1.0 / 2.0, -1, 0),
        (1.0 / 2.0, -1, -1),
        (-3.0 / 2.0, 1, -1),
        (-1.0 / 2.0, 1, -2),
        (-1.0 / 6.0, -1, -2),
        (1.0 / 6.0, -1, 1),
        (2.0 / 3.0, 2, -2),
    ],
    &[
        (1.0 / 2.0, -1, 0),
        (1.0 / 2.0, 0, -1),
        (-1.0 / 2.0, 0, -2),
        (1.0 / 2.0, 1, -2),
        (-1.0 / 2.0, 1, -1),
        (-1.0 / 2.0, -1, -1),
        (-1.0 / 6.0, -1, 1),
        (-1.0 / 6.0, 2, -2),
        (1.0 / 6.0, -1, -2),
        (1.0 / 6.0, 2, -1),
    ],
    &[
        (5.0 / 24.0, 0, 0),
        (-23.0 / 72.0, -1, 0),
        (-5.0 / 24.0, 1, 0),
        (-1.0 / 2.0, 0, -1),
        (5.0 / 18.0, 2, 0),
        (7.0 / 24.0, 0, -2),
        (1.0 / 2.0, 1, -1),
        (-11.0 / 120.0, -1, -2),
        (-1.0 / 3.0, 1, -2),
        (-1.0 / 6.0, 2, -1),
        (-1.0 / 8.0, 1, 1),
        (-1.0 / 8.0, 3, -1),
        (-1.0 / 24.0, 3, -2),
        (-1.0 / 180.0, -1, 3),
        (1.0 / 6.0, 2, -2),
        (1.0 / 8.0, -1, 1),
        (1.0 / 30.0, 4, -2),
        (7.0 / 24.0, -1, -1),
    ],
    &[
        (-5.0 / 24.0, 0, 0),
        (-5.0 / 72.0, 2, 0),
        (-1.0 / 8.0, 0, -2),
        (1.0 / 24.0, 0, 1),
        (5.0 / 24.0, 1, 0),
        (7.0 / 24.0, 0, -1),
        (11.0 / 72.0, -1, 0),
        (-5.0 / 72.0, -1, 1),
        (-1.0 / 3.0, 1, -1),
        (-1.0 / 8.0, -1, -1),
        (-1.0 / 9.0, 2, -2),
        (-1.0 / 24.0, 1, 1),
        (-1.0 / 24.0, 3, -1),
        (-1.0 / 120.0, 4, -2),
        (1.0 / 6.0, 1, -2),
        (1.0 / 6.0, 2, -1),
        (1.0 / 24.0, 3, -2),
        (1.0 / 72.0, 2, 1),
        (1.0 / 120.0, 4, -1),
        (1.0 / 180.0, -1, 3),
        (13.0 / 360.0, -1, -2),
    ],
    &[
        (35.0 / 288.0, 0, 0),
        (-17.0 / 288.0, -1, 0),
        (-5.0 / 36.0, 1, 0),
        (-5.0 / 288.0, 3, 0),
        (-1.0 / 8.0, 0, -1),
        (-1.0 / 24.0, 0, 1),
        (1.0 / 72.0, 4, 0),
        (1.0 / 480.0, 0, 2),
        (5.0 / 72.0, 2, 0),
        (31.0 / 720.0, 0, -2),
        (-19.0 / 1680.0, -1, -2),
        (-1.0 / 9.0, 2, -1),
        (-1.0 / 15.0, 1, -2),
        (-1.0 / 36.0, 3, -2),
        (-1.0 / 72.0, 2, 1),
        (-1.0 / 96.0, 3, 1),
        (-1.0 / 120.0, 4, -1),
        (-1.0 / 240.0, 5, -1),
        (-1.0 / 288.0, -1, 3),
        (-1.0 / 480.0, 1, 2),
        (-1.0 / 720.0, 5, -2),
        (-1.0 / 1440.0, -1, 2),
        (1.0 / 6.0, 1, -1),
        (1.0 / 18.0, 2, -2),
        (1.0 / 24.0, 1, 1),
        (1.0 / 24.0, 3, -1),
        (1.0 / 32.0, -1, 1),
        (1.0 / 120.0, 4, -2),
        (1.0 / 360.0, 2, 2),
        (1.0 / 480.0, 1, 3),
        (1.0 / 1260.0, 6, -2),
        (1.0 / 5040.0, -1, 5),
        (31.0 / 720.0, -1, -1),
    ],
    &[
        (-5.0 / 96.0, 0, 0),
        (-5.0 / 108.0, 2, 0),
        (-1.0 / 80.0, 0, -2),
        (-1.0 / 288.0, 4, 0),
        (-1.0 / 480.0, 0, 2),
        (-1.0 / 1440.0, 0, 3),
        (5.0 / 72.0, 1, 0),
        (5.0 / 288.0, 3, 0),
        (7.0 / 288.0, 0, 1),
        (31.0 / 720.0, 0, -1),
        (83.0 / 4320.0, -1, 0),
        (-17.0 / 1440.0, -1, 1),
        (-1.0 / 15.0, 1, -1),
        (-1.0 / 36.0, 1, 1),
        (-1.0 / 36.0, 3, -1),
        (-1.0 / 45.0, 2, -2),
        (-1.0 / 80.0, -1, -1),
        (-1.0 / 180.0, 4, -2),
        (-1.0 / 288.0, 3, 1),
        (-1.0 / 720.0, 5, -1),
        (-1.0 / 1440.0, 2, 2),
        (-1.0 / 4320.0, 2, 3),
        (-1.0 / 5040.0, -1, 5),
        (-1.0 / 5040.0, 6, -2),
        (1.0 / 18.0, 2, -1),
        (1.0 / 45.0, 1, -2),
        (1.0 / 72.0, 2, 1),
        (1.0 / 72.0, 3, -2),
        (1.0 / 120.0, 4, -1),
        (1.0 / 336.0, -1, -2),
        (1.0 / 480.0, 1, 2),
        (1.0 / 720.0, 5, -2),
        (1.0 / 1440.0, 1, 3),
        (1.0 / 1440.0, 4, 1),
        (1.0 / 1440.0, -1, 2),
        (1.0 / 5040.0, 6, -1),
        (7.0 / 4320.0, -1, 3),
    ],
];
pub(super) const SERIES_IV: [&[Term]; 6] = [
    &[
        (1.0 / 2.0, 0, -2),
        (-1.0 / 2.0, -1, 0),
        (1.0 / 2.0, -1, -1),
        (-1.0 / 2.0, 1, -2),
        (-1.0 / 6.0, -1, -2),
        (1.0 / 6.0, 2, -2),
        (2.0 / 3.0, -1, 1),
    ],
    &[
        (1.0 / 2.0, -1, 0),
        (1.0 / 2.0, 0, -1),
        (-1.0 / 2.0, 0, -2),
        (1.0 / 2.0, 1, -2),
        (-1.0 / 2.0, 1, -1),
        (-1.0 / 2.0, -1, -1),
        (-1.0 / 6.0, -1, 1),
        (-1.0 / 6.0, 2, -2),
        (1.0 / 6.0, -1, -2),
        (1.0 / 6.0, 2, -1),
    ],
    &[
        (5.0 / 24.0, 0, 0),
        (-23.0 / 72.0, -1, 0),
        (-5.0 / 24.0, 1, 0),
        (-1.0 / 2.0, 0, -1),
        (5.0 / 72.0, 2, 0),
        (7.0 / 24.0, 0, -2),
        (1.0 / 2.0, 1, -1),
        (-11.0 / 120.0, -1, -2),
        (-1.0 / 3.0, 1, -2),
        (-1.0 / 6.0, 2, -1),
        (-1.0 / 24.0, 3, -2),
        (-1.0 / 45.0, -1, 3),
        (1.0 / 6.0, 2, -2),
        (1.0 / 8.0, -1, 1),
        (1.0 / 120.0, 4, -2),
        (7.0 / 24.0, -1, -1),
    ],
    &[
        (-5.0 / 24.0, 0, 0),
        (-5.0 / 72.0, 2, 0),
        (-1.0 / 8.0, 0, -2),
        (1.0 / 24.0, 0, 1),
        (5.0 / 24.0, 1, 0),
        (7.0 / 24.0, 0, -1),
        (11.0 / 72.0, -1, 0),
        (-5.0 / 72.0, -1, 1),
        (-1.0 / 3.0, 1, -1),
        (-1.0 / 8.0, -1, -1),
        (-1.0 / 9.0, 2, -2),
        (-1.0 / 24.0, 1, 1),
        (-1.0 / 24.0, 3, -1),
        (-1.0 / 120.0, 4, -2),
        (1.0 / 6.0, 1, -2),
        (1.0 / 6.0, 2, -1),
        (1.0 / 24.0, 3, -2),
        (1.0 / 72.0, 2, 1),
        (1.0 / 120.0, 4, -1),
        (1.0 / 180.0, -1, 3),
        (13.0 / 360.0, -1, -2),
    ],
    &[
        (35.0 / 288.0, 0, 0),
        (-17.0 / 288.0, -1, 0),
        (-5.0 / 36.0, 1, 0),
        (-5.0 / 288.0, 3, 0),
        (-1.0 / 8.0, 0, -1),
        (-1.0 / 24.0, 0, 1),
        (1.0 / 288.0, 4, 0),
        (1.0 / 480.0, 0, 2),
        (5.0 / 72.0, 2, 0),
        (31.0 / 720.0, 0, -2),
        (-19.0 / 1680.0, -1, -2),
        (-1.0 / 9.0, 2, -1),
        (-1.0 / 15.0, 1, -2),
        (-1.0 / 36.0, 3, -2),
        (-1.0 / 72.0, 2, 1),
        (-1.0 / 120.0, 4, -1),
        (-1.0 / 288.0, -1, 3),
        (-1.0 / 480.0, 1, 2),
        (-1.0 / 720.0, 5, -2),
        (-1.0 / 1440.0, -1, 2),
        (1.0 / 6.0, 1, -1),
        (1.0 / 18.0, 2, -2),
        (1.0 / 24.0, 1, 1),
        (1.0 / 24.0, 3, -1),
        (1.0 / 32.0, -1, 1),
        (1.0 / 120.0, 4, -2),
        (1.0 / 1260.0, -1, 5),
        (1.0 / 1440.0, 2, 2),
        (1.0 / 5040.0, 6, -2),
        (31.0 / 720.0, -1, -1),
    ],
    &[
        (-5.0 / 96.0, 0, 0),
        (-5.0 / 108.0, 2, 0),
        (-1.0 / 80.0, 0, -2),
        (-1.0 / 288.0, 4, 0),
        (-1.0 / 480.0, 0, 2),
        (-1.0 / 1440.0, 0, 3),
        (5.0 / 72.0, 1, 0),
        (5.0 / 288.0, 3, 0),
        (7.0 / 288.0, 0, 1),
        (31.0 / 720.0, 0, -1),
        (83.0 / 4320.0, -1, 0),
        (-17.0 / 1440.0, -1, 1),
        (-1.0 / 15.0, 1, -1),
        (-1.0 / 36.0, 1, 1),
        (-1.0 / 36.0, 3, -1),
        (-1.0 / 45.0, 2, -2),
        (-1.0 / 80.0, -1, -1),
        (-1.0 / 180.0, 4, -2),
        (-1.0 / 288.0, 3, 1),
        (-1.0 / 720.0, 5, -1),
        (-1.0 / 1440.0, 2, 2),
        (-1.0 / 4320.0, 2, 3),
        (-1.0 / 5040.0, -1, 5),
        (-1.0 / 5040.0, 6, -2),
        (1.0 / 18.0, 2, -1),
        (1.0 / 45.0, 1, -2),
        (1.0 / 72.0, 2, 1),
        (1.0 / 72.0, 3, -2),
        (1.0 / 120.0, 4, -1),
        (1.0 / 336.0, -1, -2),
        (1.0 / 480.0, 1, 2),
        (1.0 / 720.0, 5, -2),
        (1.0 / 1440.0, 1, 3),
        (1.0 / 1440.0, 4, 1),
        (1.0 / 1440.0, -1, 2),
        (1.0 / 5040.0, 6, -1),
        (7.0 / 4320.0, -1, 3),
    ],
];
pub(super) const SERIES_V: [&[Term]; 6] = [
    &[(-1.0 / 2.0, -1, 0), (1.0 / 2.0, -1, -1), (2.0 / 3.0, -1, 1)],
    &[
        (1.0 / 2.0, -1, 0),
        (-1.0 / 3.0, -1, -1),
        (-1.0 / 6.0, -1, 1),
    ],
    &[
        (-1.0 / 4.0, -1, 0),
        (-1.0 / 45.0, -1, 3),
        (1.0 / 8.0, -1, 1),
        (1.0 / 8.0, -1, -1),
    ],
    &[
        (1.0 / 12.0, -1, 0),
        (-1.0 / 18.0, -1, 1),
        (-1.0 / 30.0, -1, -1),
        (1.0 / 180.0, -1, 3),
    ],
    &[
        (-1.0 / 48.0, -1, 0),
        (-1.0 / 288.0, -1, 3),
        (1.0 / 144.0, -1, -1),
        (1.0 / 1260.0, -1, 5),
        (5.0 / 288.0, -1, 1),
    ],
    &[
        (1.0 / 240.0, -1, 0),
        (-1.0 / 240.0, -1, 1),
        (-1.0 / 840.0, -1, -1),
        (-1.0 / 5040.0, -1, 5),
        (1.0 / 720.0, -1, 3),
    ],
];

pub(super) fn evaluate(table: &[&[Term]; 6], t: f64, alpha: f64, beta: f64) -> f64 {
    let mut acc = 0.0;
    for coeffs in table.iter().rev() {
        let c: f64 = coeffs
            .iter()
            .map(|&(k, pa, pb)| k * alpha.powi(pa) * beta.powi(pb))
            .sum();
        acc = acc * t + c;
    }
    acc
}
