//! Decibel conversions used at the edges of the toolkit.
//!
//! Every formula inside the crate works on linear quantities.

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}
