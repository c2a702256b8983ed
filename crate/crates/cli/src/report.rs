use std::fmt::Write as _;

use serde::Serialize;
use trajent::ErrorKind;

#[derive(Serialize)]
#[serde(untagged)]
pub enum Report {
    Entropy(EntropyReport),
    Matrix(MatrixReport),
    Cond(CondReport),
    Alpha(AlphaReport),
    Inspect(InspectReport),
}

#[derive(Serialize)]
pub struct OracleCheck {
    pub entropy_bits: f64,
    pub covered_mass: f64,
    /// Enumerated mass of the conditioning event (the covered mass when unconditioned).
    pub event_mass: f64,
    pub trajectories: usize,
    pub truncated: bool,
    /// `|closed form - enumeration|`, absent when there is no closed form.
    pub difference: Option<f64>,
}

#[derive(Serialize)]
pub struct EntropyReport {
    pub command: &'static str,
    pub chain: String,
    pub from: String,
    pub to: String,
    pub entropy_bits: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
}

#[derive(Serialize)]
pub struct MatrixReport {
    pub command: &'static str,
    pub chain: String,
    pub states: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Serialize)]
pub struct CondReport {
    pub command: &'static str,
    pub chain: String,
    pub from: String,
    pub to: String,
    /// `"sequence"` or `"set"`.
    pub mode: &'static str,
    pub states: Vec<String>,
    pub entropy_bits: f64,
    pub per_leg: Option<Vec<f64>>,
    pub leg_probabilities: Option<Vec<f64>>,
    pub event_probability: f64,
    pub poorly_conditioned: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
}

#[derive(Serialize)]
pub struct AlphaReport {
    pub command: &'static str,
    pub chain: String,
    pub from: String,
    pub via: String,
    pub to: String,
    pub alpha: f64,
    pub binary_entropy_bits: f64,
}

#[derive(Serialize)]
pub struct InspectReport {
    pub command: &'static str,
    pub chain: String,
    pub n_states: usize,
    pub states: Vec<String>,
    pub local_entropies: Vec<f64>,
    pub irreducible: bool,
    pub stationary: Option<Vec<f64>>,
    pub entropy_rate: Option<f64>,
    pub period: Option<usize>,
    pub components: Vec<Vec<String>>,
}

pub fn kind_name(kind: ErrorKind) -> &'static str {
    match kind {
        ErrorKind::Input => "input",
        ErrorKind::Infeasible => "infeasible",
        ErrorKind::Numerical => "numerical",
    }
}

fn oracle_text(out: &mut String, o: &OracleCheck, p: usize) {
    let _ = write!(
        out,
        "oracle H = {:.p$} bits ({} trajectories, covered mass {:.12}",
        o.entropy_bits, o.trajectories, o.covered_mass
    );
    if o.truncated {
        out.push_str(", truncated");
    }
    match o.difference {
        Some(diff) => {
            let _ = writeln!(out, ", difference {diff:.2e})");
        }
        None => out.push_str(")\n"),
    }
}

fn labelled(states: &[String], values: &[f64], p: usize) -> String {
    states
        .iter()
        .zip(values)
        .map(|(s, v)| format!("{s}: {v:.p$}"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl Report {
    pub fn to_text(&self, p: usize) -> String {
        let mut out = String::new();
        match self {
            Report::Entropy(r) => {
                let _ = writeln!(out, "H = {:.p$} bits", r.entropy_bits);
                if let Some(o) = &r.oracle {
                    oracle_text(&mut out, o, p);
                }
            }
            Report::Matrix(r) => {
                let width = r.states.iter().map(String::len).max().unwrap_or(1).max(p + 3);
                let _ = write!(out, "{:>width$}", "");
                for s in &r.states {
                    let _ = write!(out, " {s:>width$}");
                }
                out.push('\n');
                for (s, row) in r.states.iter().zip(&r.matrix) {
                    let _ = write!(out, "{s:>width$}");
                    for h in row {
                        let _ = write!(out, " {h:>width$.p$}");
                    }
                    out.push('\n');
                }
            }
            Report::Cond(r) if r.mode == "set" => {
                let _ = writeln!(out, "H = {:.p$} bits", r.entropy_bits);
                let _ = writeln!(
                    out,
                    "conditioned on visiting {{{}}} in any order (enumeration only)",
                    r.states.join(", ")
                );
                let _ = writeln!(out, "event probability = {:.p$}", r.event_probability);
                if let Some(o) = &r.oracle {
                    oracle_text(&mut out, o, p);
                }
            }
            Report::Cond(r) => {
                let _ = writeln!(out, "H = {:.p$} bits", r.entropy_bits);
                let mut points = vec![r.from.as_str()];
                points.extend(r.states.iter().map(String::as_str));
                points.push(r.to.as_str());
                let legs = r.per_leg.as_deref().unwrap_or_default();
                let probs = r.leg_probabilities.as_deref().unwrap_or_default();
                for (k, h) in legs.iter().enumerate() {
                    let _ = write!(out, "leg {}: {} -> {}", k + 1, points[k], points[k + 1]);
                    match probs.get(k) {
                        Some(q) => {
                            let _ = writeln!(out, " avoiding {}, H = {h:.p$} bits, p = {q:.p$}", r.to);
                        }
                        None => {
                            let _ = writeln!(out, ", H = {h:.p$} bits");
                        }
                    }
                }
                let _ = writeln!(out, "event probability = {:.p$}", r.event_probability);
                if r.poorly_conditioned {
                    out.push_str("warning: an absorption probability is close to zero\n");
                }
                if let Some(o) = &r.oracle {
                    oracle_text(&mut out, o, p);
                }
            }
            Report::Alpha(r) => {
                let _ = writeln!(out, "alpha = {:.p$}", r.alpha);
                let _ = writeln!(out, "h(alpha) = {:.p$} bits", r.binary_entropy_bits);
            }
            Report::Inspect(r) => {
                let _ = writeln!(out, "states: {}", r.n_states);
                let _ = writeln!(out, "local entropies: {}", labelled(&r.states, &r.local_entropies, p));
                match (&r.stationary, r.entropy_rate) {
                    (Some(pi), Some(rate)) => {
                        let _ = writeln!(out, "stationary distribution: {}", labelled(&r.states, pi, p));
                        let _ = writeln!(out, "entropy rate: {rate:.p$} bits per step");
                    }
                    _ => out.push_str("stationary distribution: not irreducible\n"),
                }
                if let Some(period) = r.period {
                    let _ = writeln!(out, "period: {period}");
                }
                let comps: Vec<String> = r.components.iter().map(|c| format!("{{{}}}", c.join(", "))).collect();
                let _ = writeln!(out, "strongly connected components: {}", comps.join(" "));
            }
        }
        out
    }
}
