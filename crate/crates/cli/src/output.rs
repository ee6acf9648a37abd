//! Text rendering of reports, sweeps and suite outcomes.

use std::fmt::Write as _;

use discord_core::discord::Separability;
use discord_core::families::SweepRow;
use discord_core::measurement::EigenBasis;
use discord_core::suites::SuiteOutcome;
use discord_core::{DiscordReport, MeasurementBasis};

pub const CSV_HEADER: &str = "parameter,alpha_closed,alpha_reference,delta_opt,mutual_information";

/// Unit in which entropic quantities are printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LogBase {
    #[value(name = "2")]
    Two,
    #[value(name = "e")]
    E,
}

impl LogBase {
    pub fn scale(self, bits: f64) -> f64 {
        match self {
            LogBase::Two => bits,
            LogBase::E => bits * std::f64::consts::LN_2,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            LogBase::Two => "bits",
            LogBase::E => "nats",
        }
    }
}

/// Fixed 9-decimal number with negative zero folded to zero.
pub fn fixed9(x: f64) -> String {
    let s = format!("{x:.9}");
    if s.strip_prefix('-')
        .is_some_and(|rest| rest.bytes().all(|b| b == b'0' || b == b'.'))
    {
        s[1..].to_string()
    } else {
        s
    }
}

pub fn sweep_csv(rows: &[SweepRow], base: LogBase) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fixed9(r.parameter),
            fixed9(base.scale(r.alpha_closed)),
            fixed9(base.scale(r.alpha_reference)),
            fixed9(base.scale(r.delta_opt)),
            fixed9(base.scale(r.mutual_information)),
        );
    }
    out
}

fn describe_basis(basis: &MeasurementBasis) -> String {
    match basis.bloch_angles() {
        Some(a) => format!("theta={}, phi={}", fixed9(a.theta), fixed9(a.phi)),
        None => basis
            .vectors()
            .iter()
            .map(|v| {
                let entries: Vec<String> = v
                    .iter()
                    .map(|z| format!("({}, {})", fixed9(z.re), fixed9(z.im)))
                    .collect();
                format!("[{}]", entries.join(" "))
            })
            .collect::<Vec<_>>()
            .join(" "),
    }
}

fn describe_spectrum(eig: &EigenBasis) -> String {
    let values: Vec<String> = eig.eigenvalues.iter().map(|&l| fixed9(l)).collect();
    format!("[{}]", values.join(", "))
}

pub fn report(r: &DiscordReport, base: LogBase) -> String {
    let unit = base.unit();
    let v = |x: f64| format!("{} {unit}", fixed9(base.scale(x)));
    let mut out = String::new();
    let separability = match r.separability {
        Separability::Separable => "separable",
        Separability::Entangled => "entangled",
        Separability::Undetermined => "undetermined (positive partial transpose)",
    };
    let _ = writeln!(out, "dims: {} x {}", r.split.m, r.split.n);
    let _ = writeln!(out, "separability: {separability}");
    let _ = writeln!(out, "mutual_information: {}", v(r.mutual_information));
    if let Some((value, basis)) = &r.delta_given {
        let _ = writeln!(
            out,
            "delta_given: {} (basis on A: {})",
            v(*value),
            describe_basis(basis)
        );
    }
    let _ = writeln!(out, "delta_opt: {}", v(r.delta_opt.value));
    let _ = writeln!(
        out,
        "  argmin basis on A: {}",
        describe_basis(&r.delta_opt.basis_a)
    );
    let closed = &r.alpha_closed;
    let _ = writeln!(out, "alpha_closed: {}", v(closed.value()));
    let _ = writeln!(
        out,
        "  basis on S: {}",
        describe_basis(&closed.optimum.basis_s)
    );
    let _ = writeln!(
        out,
        "  basis on A: {}",
        describe_basis(&closed.optimum.basis_a)
    );
    let _ = writeln!(
        out,
        "  spectrum of rho_S: {} degenerate={}",
        describe_spectrum(&closed.eigen_s),
        r.degenerate_s()
    );
    let _ = writeln!(
        out,
        "  spectrum of rho_A: {} degenerate={}",
        describe_spectrum(&closed.eigen_a),
        r.degenerate_a()
    );
    if let Some(oracle) = &r.alpha_oracle {
        let _ = writeln!(out, "alpha_oracle: {}", v(oracle.value));
        let _ = writeln!(out, "  basis on S: {}", describe_basis(&oracle.basis_s));
        let _ = writeln!(out, "  basis on A: {}", describe_basis(&oracle.basis_a));
    }
    let _ = writeln!(out, "alpha_swapped: {}", v(r.alpha_swapped));
    let _ = writeln!(out, "symmetry_gap: {:.3e}", base.scale(r.symmetry_gap));
    let zd = &r.zero_discord;
    match &zd.witness {
        Some(w) => {
            let _ = writeln!(
                out,
                "zero_discord: true (witness commutator max-abs {:.3e})",
                w.commutator_norm
            );
        }
        None => {
            let _ = writeln!(out, "zero_discord: {}", zd.is_zero);
        }
    }
    for note in &r.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

pub fn suite_outcome(outcome: &SuiteOutcome) -> String {
    let mut out = String::new();
    for p in &outcome.properties {
        let _ = writeln!(
            out,
            "[{}] {}: {} (trials {}, worst margin {:.3e} at trial {}, tolerance {:.1e}, failures {})",
            if p.passed() { "PASS" } else { "FAIL" },
            outcome.suite,
            p.name,
            p.trials,
            p.worst_margin,
            p.worst_trial,
            p.tolerance,
            p.failures,
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed9_folds_negative_zero() {
        assert_eq!(fixed9(-0.0), "0.000000000");
        assert_eq!(fixed9(-1e-12), "0.000000000");
        assert_eq!(fixed9(-0.5), "-0.500000000");
        assert_eq!(fixed9(1.0), "1.000000000");
    }

    #[test]
    fn nats_scale_by_ln2() {
        assert!((LogBase::E.scale(1.0) - std::f64::consts::LN_2).abs() < 1e-16);
        assert_eq!(LogBase::Two.scale(0.25), 0.25);
    }
}
