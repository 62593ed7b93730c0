//! Line-oriented circuit format.
//!
//! ```text
//! qubits 3
//! frame XIZ
//! h 0
//! rz 2 θ0*-0.25
//! cnot 0 2
//! xx 0 1 1.5707963267948966
//! ```
//!
//! Angles are either a float or `θ<id>*<scale>`. `#` starts a comment.

use std::fmt::Write;

use super::{Angle, Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliMask};

fn angle_text(a: &Angle) -> String {
    match *a {
        Angle::Const(v) => format!("{v:?}"),
        Angle::Param { id, scale } => format!("θ{id}*{scale:?}"),
    }
}

pub fn to_text(c: &Circuit) -> String {
    let mut s = String::new();
    writeln!(s, "qubits {}", c.n_qubits).unwrap();
    if !c.frame.is_identity() {
        writeln!(s, "frame {}", c.frame.label(c.n_qubits)).unwrap();
    }
    for g in &c.gates {
        let line = match g {
            Gate::H { q } => format!("h {q}"),
            Gate::S { q } => format!("s {q}"),
            Gate::Sdg { q } => format!("sdg {q}"),
            Gate::X { q } => format!("x {q}"),
            Gate::Rz { q, angle } => format!("rz {q} {}", angle_text(angle)),
            Gate::Cnot { control, target } => format!("cnot {control} {target}"),
            Gate::Xx { a, b, angle } => format!("xx {a} {b} {}", angle_text(angle)),
        };
        s.push_str(&line);
        s.push('\n');
    }
    s
}

fn parse_angle(tok: &str, line: usize) -> Result<Angle> {
    let err = |msg: String| Error::Parse { line, msg };
    let param = tok
        .strip_prefix('θ')
        .or_else(|| tok.strip_prefix("theta"))
        .or_else(|| tok.strip_prefix('t'));
    match param {
        Some(rest) => {
            let (id, scale) = match rest.split_once('*') {
                Some((i, s)) => (i, s),
                None => (rest, "1"),
            };
            let id = id
                .parse()
                .map_err(|_| err(format!("bad parameter id in {tok:?}")))?;
            let scale = scale
                .parse()
                .map_err(|_| err(format!("bad scale in {tok:?}")))?;
            Ok(Angle::Param { id, scale })
        }
        None => tok
            .parse()
            .map(Angle::Const)
            .map_err(|_| err(format!("bad angle {tok:?}"))),
    }
}

pub fn from_text(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| Error::Parse { line, msg };
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let qubit = |k: usize| -> Result<usize> {
            toks.get(k)
                .ok_or_else(|| err(format!("missing operand {k}")))?
                .parse()
                .map_err(|_| err(format!("bad qubit index {:?}", toks[k])))
        };
        let angle = |k: usize| -> Result<Angle> {
            parse_angle(
                toks.get(k).ok_or_else(|| err("missing angle".into()))?,
                line,
            )
        };
        if toks[0] == "qubits" {
            if circuit.is_some() {
                return Err(err("repeated qubits header".into()));
            }
            circuit = Some(Circuit::new(qubit(1)?));
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| err("gate before qubits header".into()))?;
        if toks[0] == "frame" {
            let label = toks.get(1).ok_or_else(|| err("missing frame".into()))?;
            let mut f = PauliMask::IDENTITY;
            for (q, ch) in label.chars().enumerate() {
                let p = Pauli::from_char(ch).ok_or_else(|| err(format!("bad Pauli {ch:?}")))?;
                f.set(q, p);
            }
            c.frame = f;
            continue;
        }
        let g = match toks[0] {
            "h" => Gate::H { q: qubit(1)? },
            "s" => Gate::S { q: qubit(1)? },
            "sdg" => Gate::Sdg { q: qubit(1)? },
            "x" => Gate::X { q: qubit(1)? },
            "rz" => Gate::Rz {
                q: qubit(1)?,
                angle: angle(2)?,
            },
            "cnot" => Gate::Cnot {
                control: qubit(1)?,
                target: qubit(2)?,
            },
            "xx" => Gate::Xx {
                a: qubit(1)?,
                b: qubit(2)?,
                angle: angle(3)?,
            },
            other => return Err(err(format!("unknown gate {other:?}"))),
        };
        c.push(g);
        if !c.is_well_formed() {
            return Err(err("qubit index out of range or repeated".into()));
        }
    }
    circuit.ok_or(Error::Parse {
        line: 0,
        msg: "missing qubits header".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = Circuit::new(3);
        c.push(Gate::H { q: 0 });
        c.push(Gate::Rz {
            q: 2,
            angle: Angle::Param { id: 4, scale: -0.25 },
        });
        c.push(Gate::Xx {
            a: 0,
            b: 1,
            angle: Angle::Const(0.1 + 0.2),
        });
        c.push(Gate::Cnot { control: 1, target: 2 });
        c.frame = PauliMask::single(1, Pauli::Y);
        assert_eq!(from_text(&to_text(&c)).unwrap(), c);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = from_text("qubits 2\nh 0\ncnot 0 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        assert!(from_text("h 0").is_err());
    }
}
