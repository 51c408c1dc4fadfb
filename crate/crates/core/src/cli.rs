//! Plain-text circuit programs and the JSON reports printed by `qbit`.
//!
//! Circuit format, one statement per line, `#` to end of line is a comment:
//!
//! ```text
//! init 111
//! rot 3 0.7853981633974483 3.141592653589793
//! xor 2 3
//! xor 1 2
//! measure
//! ```
//!
//! `init <bits>` must come first and fixes the register size. `oracle f1..f4`
//! is only valid on two Q-bits. `measure` is optional and, when present, ends
//! the program; the full outcome distribution of the final state is always
//! reported.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::algorithms::{
    classical_distinguish, deutsch_jozsa, ghz_prepare, OracleFunction, OracleId, Verdict,
};
use crate::decoherence::{shor_requirements, DecoherenceBudget};
use crate::error::{Error, Result};
use crate::gates::GateOp;
use crate::nmr::{
    certificate_threshold, make_pseudo_pure, ppt_check, separability_certificate, PureKind,
};
use crate::qstate::{QbitIndex, StateVector, MAX_QBITS};

/// Bisection tolerance for threshold estimates.
pub const THRESHOLD_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Init(String),
    Gate(GateOp),
    Oracle(OracleId),
    Measure,
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Init(bits) => write!(f, "init {bits}"),
            Statement::Gate(g) => write!(f, "{g}"),
            Statement::Oracle(id) => write!(f, "oracle {id}"),
            Statement::Measure => f.write_str("measure"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitProgram {
    n_qbits: usize,
    statements: Vec<Statement>,
}

impl CircuitProgram {
    pub fn n_qbits(&self) -> usize {
        self.n_qbits
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }

    fn init_bits(&self) -> &str {
        match &self.statements[0] {
            Statement::Init(bits) => bits,
            _ => unreachable!("validated program starts with init"),
        }
    }
}

impl fmt::Display for CircuitProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.statements.iter().try_for_each(|s| writeln!(f, "{s}"))
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_circuit(text: &str) -> Result<CircuitProgram> {
    let mut n_qbits = None;
    let mut statements = Vec::new();
    let mut measured_at = None;

    for (number, raw) in text.lines().enumerate() {
        let line_no = number + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(at) = measured_at {
            return Err(parse_error(
                line_no,
                format!("statement after measure on line {at}"),
            ));
        }
        let keyword = line.split_whitespace().next().unwrap_or("");
        let fields: Vec<&str> = line.split_whitespace().skip(1).collect();

        if keyword == "init" {
            if n_qbits.is_some() {
                return Err(parse_error(line_no, "duplicate init"));
            }
            let bits = match fields.as_slice() {
                [bits] => *bits,
                _ => return Err(parse_error(line_no, "expected: init <bitstring>")),
            };
            if bits.is_empty()
                || bits.len() > MAX_QBITS
                || !bits.chars().all(|c| c == '0' || c == '1')
            {
                return Err(parse_error(
                    line_no,
                    format!("init needs a bitstring of 1..={MAX_QBITS} Q-bits, got '{bits}'"),
                ));
            }
            n_qbits = Some(bits.len());
            statements.push(Statement::Init(bits.to_string()));
            continue;
        }

        let n = n_qbits.ok_or_else(|| parse_error(line_no, format!("'{keyword}' before init")))?;
        let statement = match keyword {
            "rot" | "xor" => {
                let g: GateOp = line
                    .parse()
                    .map_err(|e: Error| parse_error(line_no, e.to_string()))?;
                g.validate(n)
                    .map_err(|e| parse_error(line_no, e.to_string()))?;
                Statement::Gate(g)
            }
            "oracle" => {
                let id = match fields.as_slice() {
                    [name] => name
                        .parse()
                        .map_err(|e: Error| parse_error(line_no, e.to_string()))?,
                    _ => return Err(parse_error(line_no, "expected: oracle <f1|f2|f3|f4>")),
                };
                if n != 2 {
                    return Err(parse_error(line_no, Error::OracleRegister(n).to_string()));
                }
                Statement::Oracle(id)
            }
            "measure" => {
                if !fields.is_empty() {
                    return Err(parse_error(line_no, "measure takes no arguments"));
                }
                measured_at = Some(line_no);
                Statement::Measure
            }
            other => return Err(parse_error(line_no, format!("unknown keyword '{other}'"))),
        };
        statements.push(statement);
    }

    let n_qbits = n_qbits.ok_or_else(|| parse_error(1, "missing init"))?;
    Ok(CircuitProgram {
        n_qbits,
        statements,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeReport {
    pub bitstring: String,
    pub probability: f64,
}

fn outcome_reports(s: &StateVector) -> Vec<OutcomeReport> {
    s.measure_all()
        .into_iter()
        .map(|o| OutcomeReport {
            bitstring: o.bitstring(),
            probability: o.probability,
        })
        .collect()
}

fn marginals(s: &StateVector) -> Vec<f64> {
    (1..=s.n_qbits())
        .map(|q| {
            s.probability_of_one(QbitIndex::unchecked(q))
                .expect("Q-bit within register")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub final_state: StateVector,
    pub outcomes: Vec<OutcomeReport>,
    /// `P(Q-bit k reads 1)` for k = 1..=N.
    pub marginals: Vec<f64>,
    pub oracle_calls: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<String>,
}

impl RunReport {
    /// Draws one outcome from the reported distribution.
    pub fn with_sample(mut self, seed: u64) -> Self {
        let mut rng = StdRng::seed_from_u64(seed);
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let total: f64 = self.outcomes.iter().map(|o| o.probability).sum();
        let picked = self
            .outcomes
            .iter()
            .find(|o| {
                acc += o.probability / total;
                u < acc
            })
            .or(self.outcomes.last())
            .map(|o| o.bitstring.clone());
        self.sample = picked;
        self
    }
}

pub fn run_program(p: &CircuitProgram) -> Result<RunReport> {
    let mut state = StateVector::from_bits(p.init_bits())?;
    let mut oracle_calls = 0;
    for statement in &p.statements[1..] {
        state = match statement {
            Statement::Gate(g) => g.apply(&state)?,
            Statement::Oracle(id) => {
                let mut oracle = OracleFunction::new(*id);
                let next = oracle.apply(&state)?;
                oracle_calls += oracle.call_count();
                next
            }
            Statement::Measure => state,
            Statement::Init(_) => unreachable!("parser admits a single leading init"),
        };
    }
    Ok(RunReport {
        outcomes: outcome_reports(&state),
        marginals: marginals(&state),
        final_state: state,
        oracle_calls,
        sample: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalReport {
    pub verdict: Verdict,
    pub oracle_calls: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DjReport {
    pub function: OracleId,
    pub verdict: Verdict,
    pub oracle_calls: u64,
    pub final_state: StateVector,
    pub outcomes: Vec<OutcomeReport>,
    pub classical: ClassicalReport,
}

pub fn dj_report(id: OracleId) -> Result<DjReport> {
    let q = deutsch_jozsa(id)?;
    let c = classical_distinguish(id);
    Ok(DjReport {
        function: id,
        verdict: q.verdict,
        oracle_calls: q.oracle_calls,
        outcomes: outcome_reports(&q.final_state),
        final_state: q.final_state,
        classical: ClassicalReport {
            verdict: c.verdict,
            oracle_calls: c.oracle_calls,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhzReport {
    pub n: usize,
    pub final_state: StateVector,
    pub outcomes: Vec<OutcomeReport>,
}

pub fn ghz_report(n_qbits: usize) -> Result<GhzReport> {
    let s = ghz_prepare(n_qbits)?;
    Ok(GhzReport {
        n: n_qbits,
        outcomes: outcome_reports(&s),
        final_state: s,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetReport {
    #[serde(rename = "M")]
    pub max_operations: u64,
    pub required_ops: u64,
    pub qbits: u32,
    pub feasible: bool,
    /// The operation count is interpolated between the two anchor sizes.
    pub interpolated: bool,
}

pub fn budget_report(tau_dec: f64, tau_op: f64, bits: u32) -> Result<BudgetReport> {
    let shor = shor_requirements(bits)?;
    let budget = DecoherenceBudget::new(tau_dec, tau_op, shor.ops)?;
    Ok(BudgetReport {
        max_operations: budget.max_operations(),
        required_ops: shor.ops,
        qbits: shor.qbits,
        feasible: budget.feasible(),
        interpolated: shor.interpolated,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NmrSepReport {
    pub n: usize,
    pub epsilon: f64,
    pub certified: bool,
    pub min_coefficient: f64,
    pub ppt: bool,
    pub ppt_min_eigenvalue: f64,
    /// PPT decides separability only for two Q-bits; otherwise it is a
    /// necessary condition across the cut after Q-bit 1.
    pub ppt_exact: bool,
    /// Largest certified ε for this pure part, by bisection.
    pub threshold_estimate: f64,
}

pub fn nmr_sep_report(n_qbits: usize, epsilon: f64, pure: PureKind) -> Result<NmrSepReport> {
    let psi = pure.state(n_qbits)?;
    let p = make_pseudo_pure(n_qbits, epsilon, &psi)?;
    let cert = separability_certificate(&p)?;
    let ppt = ppt_check(&p.realized(), 1)?;
    Ok(NmrSepReport {
        n: n_qbits,
        epsilon,
        certified: cert.separable_certified,
        min_coefficient: cert.min_coefficient,
        ppt: ppt.ppt,
        ppt_min_eigenvalue: ppt.min_eigenvalue,
        ppt_exact: n_qbits == 2,
        threshold_estimate: certificate_threshold(&psi, THRESHOLD_TOLERANCE)?,
    })
}

/// Single-line JSON; floats use the shortest representation that parses
/// back to the same bits.
pub fn to_json<T: Serialize>(report: &T) -> String {
    serde_json::to_string(report).expect("reports serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const GHZ: &str =
        "init 111\nrot 3 0.7853981633974483 3.141592653589793\nxor 2 3\nxor 1 2\nmeasure";

    #[test]
    fn ghz_program() {
        let p = parse_circuit(GHZ).unwrap();
        assert_eq!(p.n_qbits(), 3);
        assert_eq!(p.statements().len(), 5);
        let r = run_program(&p).unwrap();
        assert_eq!(r.outcomes.len(), 2);
        assert_eq!(r.outcomes[0].bitstring, "000");
        assert_eq!(r.outcomes[1].bitstring, "111");
        for o in &r.outcomes {
            assert!((o.probability - 0.5).abs() < 1e-12);
        }
        assert_eq!(r.oracle_calls, 0);
    }

    #[test]
    fn trivial_program() {
        let r = run_program(&parse_circuit("init 00\nmeasure").unwrap()).unwrap();
        assert_eq!(
            r.outcomes,
            vec![OutcomeReport {
                bitstring: "00".into(),
                probability: 1.0
            }]
        );
        let r = run_program(&parse_circuit("  init 101   # no gates\n").unwrap()).unwrap();
        assert_eq!(r.outcomes[0].bitstring, "101");
    }

    #[test]
    fn dj_program_counts_calls() {
        let text = "init 00\nrot 1 0.7853981633974483 0\nrot 2 0.7853981633974483 3.141592653589793\n\
                    oracle f3\nrot 2 -0.7853981633974483 3.141592653589793\nrot 1 -0.7853981633974483 0\nmeasure\n";
        let r = run_program(&parse_circuit(text).unwrap()).unwrap();
        assert_eq!(r.oracle_calls, 1);
        assert!((r.marginals[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("rot 1 0 0", 1, "before init"),
            ("", 1, "missing init"),
            ("# comment\ninit 00\nfoo 1", 3, "unknown keyword"),
            ("init 00\nxor 1 3", 2, "outside register"),
            ("init 00\nxor 1 1", 2, "must differ"),
            ("init 00\ninit 01", 2, "duplicate init"),
            ("init 000\noracle f1", 2, "exactly 2"),
            ("init 00\noracle f9", 2, "unknown oracle"),
            ("init 00\nmeasure\nxor 1 2", 3, "after measure"),
            ("init 0a", 1, "bitstring"),
            ("init 00\nrot 1 abc 0", 2, "bad angle"),
        ];
        for (text, line, fragment) in cases {
            match parse_circuit(text) {
                Err(Error::Parse { line: l, message }) => {
                    assert_eq!(l, line, "{text:?}");
                    assert!(message.contains(fragment), "{text:?}: {message}");
                }
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn printing_round_trips() {
        let p = parse_circuit("init 01 # c\n\n  rot   2 0.1 -3e-7\nxor 1 2\noracle f4\nmeasure")
            .unwrap();
        let text = p.to_string();
        assert_eq!(parse_circuit(&text).unwrap(), p);
    }

    #[test]
    fn sampling_is_seeded() {
        let r = run_program(&parse_circuit(GHZ).unwrap()).unwrap();
        let a = r.clone().with_sample(7);
        let b = r.with_sample(7);
        assert_eq!(a.sample, b.sample);
        assert!(matches!(a.sample.as_deref(), Some("000") | Some("111")));
    }

    #[test]
    fn budget_and_nmr_reports() {
        let b = budget_report(1.0, 1e-7, 4).unwrap();
        assert_eq!(
            (b.max_operations, b.required_ops, b.qbits, b.feasible),
            (10_000_000, 1_000_000, 3, true)
        );
        assert!(!budget_report(1.0, 1e-7, 400).unwrap().feasible);
        let json = to_json(&b);
        assert!(json.starts_with("{\"M\":10000000,"));

        let r = nmr_sep_report(2, 0.5, PureKind::Bell).unwrap();
        assert!(!r.certified && !r.ppt && r.ppt_exact);
        assert!((r.threshold_estimate - 1.0 / 9.0).abs() < 1e-6);
        assert!(nmr_sep_report(3, 0.5, PureKind::Bell).is_err());
    }
}
