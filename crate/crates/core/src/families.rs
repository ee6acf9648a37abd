//! The two-qubit Werner and Zurek families and their printed α curves.

use std::fmt;
use std::str::FromStr;

use crate::discord::{alpha_closed_form_with, delta_opt, mutual_information};
use crate::error::{DiscordError, Result};
use crate::linalg::{tensor_product, ComplexMatrix, C64, ZERO};
use crate::optimize::SearchConfig;
use crate::state::{DensityMatrix, Split};

/// Slack allowed at the edges of the physical parameter ranges.
const RANGE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Werner,
    Zurek,
}

impl Family {
    /// Physical parameter range `[lo, hi]`.
    pub fn range(self) -> (f64, f64) {
        match self {
            Family::Werner => (-1.0, 1.0 / 3.0),
            Family::Zurek => (-1.0, 1.0),
        }
    }

    pub fn state(self, param: f64) -> Result<DensityMatrix> {
        match self {
            Family::Werner => werner(param),
            Family::Zurek => zurek(param),
        }
    }

    pub fn alpha_reference(self, param: f64) -> f64 {
        match self {
            Family::Werner => alpha_werner_reference(param),
            Family::Zurek => alpha_zurek_reference(param),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Werner => "werner",
            Family::Zurek => "zurek",
        })
    }
}

impl FromStr for Family {
    type Err = DiscordError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "werner" => Ok(Family::Werner),
            "zurek" => Ok(Family::Zurek),
            other => Err(DiscordError::InvalidParameter(format!(
                "unknown family '{other}' (expected werner or zurek)"
            ))),
        }
    }
}

/// A family member identified by its parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyPoint {
    pub family: Family,
    pub parameter: f64,
}

impl FamilyPoint {
    pub fn new(family: Family, parameter: f64) -> Result<Self> {
        check_range(family, parameter)?;
        Ok(Self { family, parameter })
    }
}

fn check_range(family: Family, param: f64) -> Result<()> {
    let (lo, hi) = family.range();
    if !param.is_finite() || param < lo - RANGE_SLACK || param > hi + RANGE_SLACK {
        let detail = match family {
            Family::Werner if param > hi => format!(
                "; eigenvalue (1-3x)/4 = {:.6} is negative",
                (1.0 - 3.0 * param) / 4.0
            ),
            Family::Werner if param < lo => {
                format!(
                    "; eigenvalue (1+x)/4 = {:.6} is negative",
                    (1.0 + param) / 4.0
                )
            }
            Family::Zurek => format!(
                "; eigenvalue (1-|z|)/2 = {:.6} is negative",
                (1.0 - param.abs()) / 2.0
            ),
            _ => String::new(),
        };
        return Err(DiscordError::InvalidParameter(format!(
            "{family} parameter {param} outside the physical range [{lo:.6}, {hi:.6}]{detail}"
        )));
    }
    Ok(())
}

fn paulis() -> [ComplexMatrix; 3] {
    let x = ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2");
    let y =
        ComplexMatrix::from_row_major(2, vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO])
            .expect("2x2");
    let z = ComplexMatrix::from_diagonal(&[1.0, -1.0]);
    [x, y, z]
}

/// `(I + x σ⃗⊗σ⃗)/4` for `x ∈ [-1, 1/3]`.
pub fn werner(x: f64) -> Result<DensityMatrix> {
    check_range(Family::Werner, x)?;
    let mut m = ComplexMatrix::identity(4);
    for p in paulis() {
        m = &m + &tensor_product(&p, &p).scale_real(x);
    }
    DensityMatrix::validate(m.scale_real(0.25), Some(Split::new(2, 2)))
}

/// `½(|00⟩⟨00| + |11⟩⟨11|) + z/2 (|00⟩⟨11| + |11⟩⟨00|)` for `z ∈ [-1, 1]`.
pub fn zurek(z: f64) -> Result<DensityMatrix> {
    check_range(Family::Zurek, z)?;
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = C64::new(0.5, 0.0);
    m[(3, 3)] = C64::new(0.5, 0.0);
    m[(0, 3)] = C64::new(0.5 * z, 0.0);
    m[(3, 0)] = C64::new(0.5 * z, 0.0);
    DensityMatrix::validate(m, Some(Split::new(2, 2)))
}

/// `t log2 t` with `0 log 0 = 0`.
fn xlog2(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        t * t.log2()
    }
}

/// `(1+x)/4 log (1+x)/4 + (1-3x)/4 log (1-3x)/4 - (1-x)/2 log (1-x)/4`, in bits.
pub fn alpha_werner_reference(x: f64) -> f64 {
    let a = (1.0 + x) / 4.0;
    let b = (1.0 - 3.0 * x) / 4.0;
    let c = (1.0 - x) / 4.0;
    let last = if c <= 0.0 {
        0.0
    } else {
        (1.0 - x) / 2.0 * c.log2()
    };
    xlog2(a) + xlog2(b) - last
}

/// `(1+z)/2 log (1+z)/2 + (1-z)/2 log (1-z)/2 + log 2`, in bits.
pub fn alpha_zurek_reference(z: f64) -> f64 {
    xlog2((1.0 + z) / 2.0) + xlog2((1.0 - z) / 2.0) + 1.0
}

/// One line of a family sweep, all values in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub parameter: f64,
    pub alpha_closed: f64,
    pub alpha_reference: f64,
    pub delta_opt: f64,
    pub mutual_information: f64,
}

/// Evenly spaced parameters from `from` to `to` inclusive; one step gives
/// just `from`.
pub fn sweep_parameters(from: f64, to: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![from],
        _ => (0..steps)
            .map(|k| {
                if k == steps - 1 {
                    to
                } else {
                    from + (to - from) * k as f64 / (steps - 1) as f64
                }
            })
            .collect(),
    }
}

/// Evaluates every measure along a family.
pub fn sweep(
    family: Family,
    from: f64,
    to: f64,
    steps: usize,
    delta_search: &SearchConfig,
    alpha_search: &SearchConfig,
) -> Result<Vec<SweepRow>> {
    if steps == 0 {
        return Err(DiscordError::InvalidParameter(
            "sweep needs at least one step".into(),
        ));
    }
    check_range(family, from)?;
    check_range(family, to)?;
    sweep_parameters(from, to, steps)
        .into_iter()
        .map(|parameter| {
            let rho = family.state(parameter)?;
            Ok(SweepRow {
                parameter,
                alpha_closed: alpha_closed_form_with(&rho, alpha_search)?.value(),
                alpha_reference: family.alpha_reference(parameter),
                delta_opt: delta_opt(&rho, delta_search)?.value,
                mutual_information: mutual_information(&rho)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use crate::state::{binary_entropy, von_neumann_entropy};

    #[test]
    fn werner_examples() {
        let w0 = werner(0.0).unwrap();
        assert!(
            w0.matrix()
                .max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25))
                < 1e-16
        );

        let mut ev = werner(1.0 / 3.0).unwrap().eigenvalues();
        ev.sort_by(|a, b| b.total_cmp(a));
        for (got, want) in ev.iter().zip([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0]) {
            assert!((got - want).abs() < 1e-14);
        }

        let singlet = werner(-1.0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [ZERO, C64::new(h, 0.0), C64::new(-h, 0.0), ZERO];
        assert!((singlet.matrix().expectation(&psi) - 1.0).abs() < 1e-14);
        assert!(von_neumann_entropy(&singlet).abs() < 1e-12);
    }

    #[test]
    fn werner_out_of_range_cites_eigenvalue() {
        let err = werner(0.5).unwrap_err().to_string();
        assert!(err.contains("-0.125"), "{err}");
        assert!(werner(-1.1).is_err());
    }

    #[test]
    fn zurek_examples() {
        assert!(
            zurek(0.0)
                .unwrap()
                .matrix()
                .max_abs_diff(&ComplexMatrix::from_diagonal(&[0.5, 0.0, 0.0, 0.5]))
                < 1e-16
        );
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell =
            DensityMatrix::pure(&[C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)], None).unwrap();
        assert!(zurek(1.0).unwrap().matrix().max_abs_diff(bell.matrix()) < 1e-15);
        assert!((von_neumann_entropy(&zurek(0.5).unwrap()) - binary_entropy(0.75)).abs() < 1e-12);
        assert!(zurek(1.5).is_err());
        let _ = ONE;
    }

    #[test]
    fn reference_curves() {
        assert_eq!(alpha_werner_reference(0.0), 0.0);
        assert_eq!(alpha_zurek_reference(0.0), 0.0);
        assert_eq!(alpha_zurek_reference(1.0), 1.0);
        assert!((alpha_werner_reference(1.0 / 3.0) - 1.0 / 3.0).abs() < 1e-15);
        // Zurek curve equals 1 - h2((1+z)/2).
        for z in [-0.9, -0.3, 0.2, 0.6, 0.95] {
            assert!(
                (alpha_zurek_reference(z) - (1.0 - binary_entropy((1.0 + z) / 2.0))).abs() < 1e-14
            );
        }
    }

    #[test]
    fn family_names_parse() {
        assert_eq!("Werner".parse::<Family>().unwrap(), Family::Werner);
        assert!("ghz".parse::<Family>().is_err());
        assert!(FamilyPoint::new(Family::Werner, 0.34).is_err());
    }

    #[test]
    fn sweep_parameter_layout() {
        assert_eq!(sweep_parameters(0.0, 0.0, 1), vec![0.0]);
        let p = sweep_parameters(0.0, 1.0 / 3.0, 34);
        assert_eq!(p.len(), 34);
        assert_eq!(p[33], 1.0 / 3.0);
        assert!((p[1] - 1.0 / 99.0).abs() < 1e-16);
    }
}
