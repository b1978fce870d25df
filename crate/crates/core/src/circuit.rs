//! Clifford+T circuits: the `.qct` text format, a dense simulator and a
//! random generator.
//!
//! Grammar:
//!
//! ```text
//! qubits N          # first non-comment line
//! H q | S q | T q | X q | Y q | Z q
//! CNOT control target
//! ```
//!
//! Gate names are case-insensitive and `#` starts a comment.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::limits;
use crate::state::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    T(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::T(_) => "T",
            Gate::X(_) => "X",
            Gate::Y(_) => "Y",
            Gate::Z(_) => "Z",
            Gate::Cnot { .. } => "CNOT",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::T(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn is_t(&self) -> bool {
        matches!(self, Gate::T(_))
    }

    pub fn is_clifford(&self) -> bool {
        !self.is_t()
    }

    /// Apply in place to little-endian amplitudes.
    pub fn apply(&self, amps: &mut [Complex64]) {
        match *self {
            Gate::H(q) => {
                let bit = 1usize << q;
                let s = FRAC_1_SQRT_2;
                for i in (0..amps.len()).filter(|i| i & bit == 0) {
                    let (a, b) = (amps[i], amps[i | bit]);
                    amps[i] = (a + b) * s;
                    amps[i | bit] = (a - b) * s;
                }
            }
            Gate::S(q) => phase_on_one(amps, q, Complex64::new(0.0, 1.0)),
            Gate::T(q) => phase_on_one(amps, q, Complex64::from_polar(1.0, FRAC_PI_4)),
            Gate::Z(q) => phase_on_one(amps, q, Complex64::new(-1.0, 0.0)),
            Gate::X(q) => {
                let bit = 1usize << q;
                for i in (0..amps.len()).filter(|i| i & bit == 0) {
                    amps.swap(i, i | bit);
                }
            }
            Gate::Y(q) => {
                let bit = 1usize << q;
                let i_unit = Complex64::new(0.0, 1.0);
                for i in (0..amps.len()).filter(|i| i & bit == 0) {
                    let (a, b) = (amps[i], amps[i | bit]);
                    amps[i] = -i_unit * b;
                    amps[i | bit] = i_unit * a;
                }
            }
            Gate::Cnot { control, target } => {
                let (cb, tb) = (1usize << control, 1usize << target);
                for i in (0..amps.len()).filter(|i| i & cb != 0 && i & tb == 0) {
                    amps.swap(i, i | tb);
                }
            }
        }
    }
}

fn phase_on_one(amps: &mut [Complex64], q: usize, phase: Complex64) {
    let bit = 1usize << q;
    amps.iter_mut().enumerate().filter(|(i, _)| i & bit != 0).for_each(|(_, a)| *a *= phase);
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            Gate::H(q) | Gate::S(q) | Gate::T(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => {
                write!(f, "{} {q}", self.name())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
    t_count: usize,
}

impl Circuit {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidQubitCount(0));
        }
        Ok(Self { n, gates: Vec::new(), t_count: 0 })
    }

    pub fn from_gates(n: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Self::new(n)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(&q) = gate.qubits().iter().find(|&&q| q >= self.n) {
            return Err(Error::InvalidParameter(format!("qubit {q} out of range for {} qubits", self.n)));
        }
        if let Gate::Cnot { control, target } = gate {
            if control == target {
                return Err(Error::InvalidParameter("duplicate CNOT targets".into()));
            }
        }
        self.t_count += gate.is_t() as usize;
        self.gates.push(gate);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn t_count(&self) -> usize {
        self.t_count
    }

    /// Canonical `.qct` text.
    pub fn render(&self) -> String {
        let mut s = format!("qubits {}\n", self.n);
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }
}

/// Parse `.qct` text.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let perr = |line: usize, column: usize, message: String| Error::Parse { line, column, message };
    let mut circuit: Option<Circuit> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        // (column, token) pairs, columns 1-based
        let tokens: Vec<(usize, &str)> = body
            .char_indices()
            .filter(|&(i, ch)| !ch.is_whitespace() && (i == 0 || body[..i].ends_with(char::is_whitespace)))
            .map(|(i, _)| (i + 1, body[i..].split_whitespace().next().unwrap_or("")))
            .collect();
        let Some(&(col0, head)) = tokens.first() else { continue };

        let Some(c) = circuit.as_mut() else {
            if !head.eq_ignore_ascii_case("qubits") {
                return Err(perr(line, col0, format!("expected `qubits N` header, found `{head}`")));
            }
            let n = match tokens.get(1) {
                Some(&(col, w)) => w
                    .parse::<usize>()
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| perr(line, col, format!("invalid qubit count `{w}`")))?,
                None => return Err(perr(line, col0, "missing qubit count".into())),
            };
            if let Some(&(col, w)) = tokens.get(2) {
                return Err(perr(line, col, format!("unexpected token `{w}` after qubit count")));
            }
            circuit = Some(Circuit::new(n)?);
            continue;
        };

        let name = head.to_ascii_uppercase();
        let arity = match name.as_str() {
            "H" | "S" | "T" | "X" | "Y" | "Z" => 1,
            "CNOT" | "CX" => 2,
            _ => return Err(perr(line, col0, format!("unknown gate \"{head}\""))),
        };
        let args = &tokens[1..];
        if args.len() != arity {
            return Err(perr(
                line,
                col0,
                format!("arity mismatch: {name} takes {arity} qubit index(es), got {}", args.len()),
            ));
        }
        let mut qs = Vec::with_capacity(arity);
        for &(col, w) in args {
            let q: usize = w.parse().map_err(|_| perr(line, col, format!("invalid qubit index `{w}`")))?;
            if q >= c.n {
                return Err(perr(line, col, format!("qubit index {q} out of range for {} qubits", c.n)));
            }
            qs.push(q);
        }
        let gate = match name.as_str() {
            "H" => Gate::H(qs[0]),
            "S" => Gate::S(qs[0]),
            "T" => Gate::T(qs[0]),
            "X" => Gate::X(qs[0]),
            "Y" => Gate::Y(qs[0]),
            "Z" => Gate::Z(qs[0]),
            _ => {
                if qs[0] == qs[1] {
                    return Err(perr(line, args[1].0, "duplicate CNOT targets".into()));
                }
                Gate::Cnot { control: qs[0], target: qs[1] }
            }
        };
        c.push(gate)?;
    }
    circuit.ok_or_else(|| perr(1, 1, "missing `qubits N` header".into()))
}

/// Run the circuit on `|0^n>`.
pub fn simulate(circuit: &Circuit) -> Result<StateVector> {
    limits::check_state("circuit simulation", circuit.n)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << circuit.n];
    amps[0] = Complex64::new(1.0, 0.0);
    for g in &circuit.gates {
        g.apply(&mut amps);
    }
    Ok(StateVector::from_normalized_parts(circuit.n, amps))
}

/// Apply extra gates to an existing state.
pub fn apply_gates(state: &StateVector, gates: &[Gate]) -> Result<StateVector> {
    let n = state.n();
    if let Some(q) = gates.iter().flat_map(|g| g.qubits()).find(|&q| q >= n) {
        return Err(Error::InvalidParameter(format!("qubit {q} out of range for {n} qubits")));
    }
    let mut amps = state.amplitudes().to_vec();
    for g in gates {
        g.apply(&mut amps);
    }
    Ok(StateVector::from_normalized_parts(n, amps))
}

/// Draw one gate uniformly from the Clifford generators `{H, S, CNOT}`.
pub fn random_clifford_gate<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Gate {
    let kinds = if n >= 2 { 3 } else { 2 };
    match rng.random_range(0..kinds) {
        0 => Gate::H(rng.random_range(0..n)),
        1 => Gate::S(rng.random_range(0..n)),
        _ => {
            let control = rng.random_range(0..n);
            let target = (control + rng.random_range(1..n)) % n;
            Gate::Cnot { control, target }
        }
    }
}

/// `depth` random Clifford generators with exactly `t` T gates inserted at
/// uniformly random positions and qubits.
pub fn random_clifford_t<R: Rng + ?Sized>(n: usize, t: usize, depth: usize, rng: &mut R) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidQubitCount(0));
    }
    let mut gates: Vec<Gate> = (0..depth).map(|_| random_clifford_gate(n, rng)).collect();
    for _ in 0..t {
        let pos = rng.random_range(0..=gates.len());
        gates.insert(pos, Gate::T(rng.random_range(0..n)));
    }
    Circuit::from_gates(n, gates)
}
