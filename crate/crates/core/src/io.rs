//! JSON document formats shared by the CLI and the library surface.
//!
//! Circuit files: {"qubits": n, "gates": [{"kind", "targets", "controls",
//! "matrix"?}]} with matrices flattened row-major as [re, im] pairs; the
//! matrix is omitted for named kinds and reconstructed on read. Instance
//! files embed a circuit plus single-qubit Pauli probe lists. Serialization
//! of f64 round-trips exactly, so a written circuit reads back bit-identical.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, GateKind, Polarity};
use crate::error::{Error, Result};
use crate::estimator::EstimateResult;
use crate::pauli::{PauliLetter, PauliString, Probe};
use crate::reduction::OTOCInstance;
use crate::sim::{DQC1Circuit, Statistic};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GateDoc {
    pub kind: String,
    pub targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub controls: Vec<(usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CircuitDoc {
    pub qubits: usize,
    pub gates: Vec<GateDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeDoc {
    pub qubit: usize,
    pub pauli: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub k: usize,
    pub circuit: CircuitDoc,
    pub w: Vec<ProbeDoc>,
    pub v: Vec<ProbeDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Dqc1Doc {
    pub circuit: CircuitDoc,
    pub clean_qubit: usize,
    pub n_mixed: usize,
    pub statistic: String,
    pub meaning: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermDoc {
    pub coefficient: [f64; 2],
    pub estimate: [f64; 2],
    pub shots: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EstimateDoc {
    pub value: [f64; 2],
    pub epsilon: f64,
    pub failure_prob: f64,
    pub shots_total: u64,
    pub seed: u64,
    pub terms: Vec<TermDoc>,
}

fn kind_name(kind: GateKind) -> &'static str {
    match kind {
        GateKind::I => "I",
        GateKind::X => "X",
        GateKind::Y => "Y",
        GateKind::Z => "Z",
        GateKind::H => "H",
        GateKind::S => "S",
        GateKind::Sdg => "Sdg",
        GateKind::Dense1 => "dense1",
        GateKind::Dense2 => "dense2",
    }
}

fn kind_from_name(name: &str) -> Result<GateKind> {
    Ok(match name {
        "I" => GateKind::I,
        "X" => GateKind::X,
        "Y" => GateKind::Y,
        "Z" => GateKind::Z,
        "H" => GateKind::H,
        "S" => GateKind::S,
        "Sdg" => GateKind::Sdg,
        "dense1" => GateKind::Dense1,
        "dense2" => GateKind::Dense2,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown gate kind \"{other}\""
            )))
        }
    })
}

fn polarity_name(p: Polarity) -> &'static str {
    match p {
        Polarity::OnZero => "0",
        Polarity::OnOne => "1",
    }
}

fn polarity_from_name(s: &str) -> Result<Polarity> {
    match s {
        "0" => Ok(Polarity::OnZero),
        "1" => Ok(Polarity::OnOne),
        other => Err(Error::InvalidParameter(format!(
            "control polarity must be \"0\" or \"1\", got \"{other}\""
        ))),
    }
}

pub fn circuit_to_doc(circuit: &Circuit) -> CircuitDoc {
    let gates = circuit
        .gates()
        .iter()
        .map(|g| GateDoc {
            kind: kind_name(g.kind()).to_string(),
            targets: g.targets().to_vec(),
            controls: g
                .controls()
                .iter()
                .map(|&(q, p)| (q, polarity_name(p).to_string()))
                .collect(),
            matrix: if g.kind().is_named() {
                None
            } else {
                Some(g.matrix().iter().map(|z| [z.re, z.im]).collect())
            },
        })
        .collect();
    CircuitDoc {
        qubits: circuit.n_qubits(),
        gates,
    }
}

pub fn circuit_from_doc(doc: &CircuitDoc) -> Result<Circuit> {
    let mut circuit = Circuit::new(doc.qubits);
    for g in &doc.gates {
        let kind = kind_from_name(&g.kind)?;
        let base = match kind {
            GateKind::Dense1 | GateKind::Dense2 => {
                let entries: Vec<Complex64> = g
                    .matrix
                    .as_ref()
                    .ok_or_else(|| {
                        Error::InvalidParameter("dense gate requires a matrix".into())
                    })?
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect();
                if kind == GateKind::Dense1 {
                    let t = *g.targets.first().ok_or_else(|| {
                        Error::InvalidParameter("dense1 gate requires one target".into())
                    })?;
                    Gate::dense1(t, entries)?
                } else {
                    if g.targets.len() != 2 {
                        return Err(Error::InvalidParameter(
                            "dense2 gate requires two targets".into(),
                        ));
                    }
                    Gate::dense2(g.targets[0], g.targets[1], entries)?
                }
            }
            named => {
                if g.targets.len() != 1 {
                    return Err(Error::InvalidParameter(
                        "named gates take exactly one target".into(),
                    ));
                }
                Gate::named(named, g.targets[0])
            }
        };
        let controls = g
            .controls
            .iter()
            .map(|(q, p)| Ok((*q, polarity_from_name(p)?)))
            .collect::<Result<Vec<_>>>()?;
        let gate = if controls.is_empty() {
            base
        } else {
            base.with_controls(controls)?
        };
        circuit.push(gate)?;
    }
    Ok(circuit)
}

fn probe_to_doc(probe: &Probe) -> Result<ProbeDoc> {
    let word = probe
        .as_pauli()
        .ok_or_else(|| Error::InvalidParameter("instance files carry Pauli probes only".into()))?;
    let mut sites = word
        .letters()
        .iter()
        .enumerate()
        .filter(|(_, &l)| l != PauliLetter::I);
    match (sites.next(), sites.next()) {
        (Some((q, &l)), None) => Ok(ProbeDoc {
            qubit: q,
            pauli: l.as_char().to_string(),
        }),
        (None, _) => Ok(ProbeDoc {
            qubit: 0,
            pauli: "I".to_string(),
        }),
        _ => Err(Error::InvalidParameter(
            "instance files carry single-qubit probes only".into(),
        )),
    }
}

fn probe_from_doc(doc: &ProbeDoc, n_qubits: usize) -> Result<Probe> {
    if doc.pauli.chars().count() != 1 {
        return Err(Error::InvalidParameter(format!(
            "probe pauli must be one letter, got \"{}\"",
            doc.pauli
        )));
    }
    let letter = PauliLetter::from_char(doc.pauli.chars().next().unwrap())?;
    Ok(Probe::Pauli(PauliString::single(n_qubits, doc.qubit, letter)?))
}

pub fn instance_to_doc(instance: &OTOCInstance) -> Result<InstanceDoc> {
    Ok(InstanceDoc {
        k: instance.k(),
        circuit: circuit_to_doc(instance.u()),
        w: instance.w().iter().map(probe_to_doc).collect::<Result<_>>()?,
        v: instance.v().iter().map(probe_to_doc).collect::<Result<_>>()?,
    })
}

pub fn instance_from_doc(doc: &InstanceDoc) -> Result<OTOCInstance> {
    let u = circuit_from_doc(&doc.circuit)?;
    let n = u.n_qubits();
    if doc.w.len() != doc.k || doc.v.len() != doc.k {
        return Err(Error::ProbeCountMismatch(doc.w.len(), doc.v.len()));
    }
    let w = doc
        .w
        .iter()
        .map(|p| probe_from_doc(p, n))
        .collect::<Result<Vec<_>>>()?;
    let v = doc
        .v
        .iter()
        .map(|p| probe_from_doc(p, n))
        .collect::<Result<Vec<_>>>()?;
    OTOCInstance::new(u, w, v)
}

pub fn dqc1_to_doc(d: &DQC1Circuit) -> Dqc1Doc {
    Dqc1Doc {
        circuit: circuit_to_doc(d.circuit()),
        clean_qubit: d.clean_qubit(),
        n_mixed: d.n_mixed(),
        statistic: match d.statistic() {
            Statistic::RealPart => "real".to_string(),
            Statistic::ImaginaryPart => "imag".to_string(),
        },
        meaning: d.meaning().to_string(),
    }
}

pub fn dqc1_from_doc(doc: &Dqc1Doc) -> Result<DQC1Circuit> {
    if doc.clean_qubit != 0 {
        return Err(Error::InvalidParameter(
            "the clean qubit is fixed at index 0".into(),
        ));
    }
    let statistic = match doc.statistic.as_str() {
        "real" => Statistic::RealPart,
        "imag" => Statistic::ImaginaryPart,
        other => {
            return Err(Error::InvalidParameter(format!(
                "statistic must be \"real\" or \"imag\", got \"{other}\""
            )))
        }
    };
    DQC1Circuit::new(
        circuit_from_doc(&doc.circuit)?,
        doc.n_mixed,
        statistic,
        doc.meaning.clone(),
    )
}

pub fn estimate_to_doc(result: &EstimateResult) -> EstimateDoc {
    EstimateDoc {
        value: [result.value.re, result.value.im],
        epsilon: result.epsilon,
        failure_prob: result.failure_prob,
        shots_total: result.shots_total,
        seed: result.seed,
        terms: result
            .terms
            .iter()
            .map(|t| TermDoc {
                coefficient: [t.coefficient.re, t.coefficient.im],
                estimate: [t.estimate.re, t.estimate.im],
                shots: t.shots,
            })
            .collect(),
    }
}
