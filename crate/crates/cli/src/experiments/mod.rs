pub mod evolve;
pub mod inequalities;
pub mod norms;
pub mod picard;
pub mod sharpness;
pub mod vector_fields;

/// `|measured/expected − 1|`.
pub fn relative_error(measured: f64, expected: f64) -> f64 {
    (measured / expected - 1.0).abs()
}
