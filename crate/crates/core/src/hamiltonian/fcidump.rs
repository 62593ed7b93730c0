//! FCIDUMP integral files.

use std::fmt::Write as _;

use super::SpinOrbitalHamiltonian;
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Reads `KEY=value` from the namelist header.
fn header_value(header: &str, key: &str) -> Option<String> {
    let upper = header.to_ascii_uppercase();
    let bytes = upper.as_bytes();
    let mut from = 0;
    while let Some(pos) = upper[from..].find(key) {
        let start = from + pos;
        let before_ok = start == 0 || !bytes[start - 1].is_ascii_alphanumeric();
        let rest = upper[start + key.len()..].trim_start();
        if before_ok && rest.starts_with('=') {
            let value: String = rest[1..]
                .trim_start()
                .chars()
                .take_while(|c| c.is_ascii_digit() || *c == '-' || *c == '+')
                .collect();
            return Some(value);
        }
        from = start + key.len();
    }
    None
}

/// Parses an FCIDUMP file (1-based spatial indices, chemist notation).
pub fn parse_fcidump(text: &str) -> Result<SpinOrbitalHamiltonian> {
    let lines: Vec<&str> = text.lines().collect();
    let first = lines
        .iter()
        .position(|l| !l.trim().is_empty())
        .ok_or_else(|| parse_err(1, "empty file"))?;
    if !lines[first].trim_start().to_ascii_uppercase().starts_with("&FCI") {
        return Err(parse_err(first + 1, "expected '&FCI' namelist header"));
    }
    let mut header = String::new();
    let mut body_start = None;
    for (i, l) in lines.iter().enumerate().skip(first) {
        let t = l.trim();
        let u = t.to_ascii_uppercase();
        if u == "&END" || u == "/" || u.ends_with("&END") || u == "$END" {
            header.push_str(&t[..t.len() - if u == "/" { 1 } else { 4 }]);
            body_start = Some(i + 1);
            break;
        }
        header.push_str(t);
        header.push(' ');
    }
    let body_start = body_start.ok_or_else(|| parse_err(first + 1, "unterminated header"))?;
    let int_key = |key: &str| -> Result<Option<i64>> {
        match header_value(&header, key) {
            None => Ok(None),
            Some(v) => v
                .parse::<i64>()
                .map(Some)
                .map_err(|_| parse_err(first + 1, format!("non-numeric {key}"))),
        }
    };
    let norb = int_key("NORB")?.ok_or_else(|| parse_err(first + 1, "missing NORB"))?;
    let nelec = int_key("NELEC")?.ok_or_else(|| parse_err(first + 1, "missing NELEC"))?;
    if !(0..=32).contains(&norb) {
        return Err(parse_err(first + 1, format!("NORB={norb} out of range")));
    }
    if nelec < 0 || nelec > 2 * norb {
        return Err(parse_err(first + 1, format!("NELEC={nelec} out of range")));
    }
    let n = norb as usize;
    let mut h = vec![vec![0.0; n]; n];
    let mut eri = vec![0.0; n * n * n * n];
    let idx = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
    let mut e_core = 0.0;
    for (lineno, l) in lines.iter().enumerate().skip(body_start) {
        let t = l.trim();
        if t.is_empty() {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(parse_err(lineno + 1, "expected 'value i j k l'"));
        }
        let value: f64 = fields[0]
            .replace(['D', 'd'], "E")
            .parse()
            .map_err(|_| parse_err(lineno + 1, format!("non-numeric value '{}'", fields[0])))?;
        if !value.is_finite() {
            return Err(parse_err(lineno + 1, "non-finite value"));
        }
        let mut ix = [0usize; 4];
        for (slot, f) in ix.iter_mut().zip(&fields[1..]) {
            let v: i64 = f
                .parse()
                .map_err(|_| parse_err(lineno + 1, format!("non-numeric index '{f}'")))?;
            if v < 0 || v > norb {
                return Err(parse_err(lineno + 1, format!("index {v} outside 0..={norb}")));
            }
            *slot = v as usize;
        }
        match ix {
            [0, 0, 0, 0] => e_core = value,
            [i, 0, 0, 0] if i > 0 => {} // orbital energy, unused
            [i, j, 0, 0] if i > 0 && j > 0 => {
                h[i - 1][j - 1] = value;
                h[j - 1][i - 1] = value;
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                let (i, j, k, l) = (i - 1, j - 1, k - 1, l - 1);
                for (a, b, c, d) in [
                    (i, j, k, l),
                    (j, i, k, l),
                    (i, j, l, k),
                    (j, i, l, k),
                    (k, l, i, j),
                    (l, k, i, j),
                    (k, l, j, i),
                    (l, k, j, i),
                ] {
                    eri[idx(a, b, c, d)] = value;
                }
            }
            _ => return Err(parse_err(lineno + 1, "malformed index pattern")),
        }
    }
    Ok(SpinOrbitalHamiltonian::from_spatial(
        n,
        nelec as usize,
        e_core,
        &h,
        |i, j, k, l| eri[idx(i, j, k, l)],
    ))
}

/// Writes a spin-free Hamiltonian back to FCIDUMP text.
///
/// Spatial integrals are read from the α block (`h_ij`) and the αβ block
/// (`(ij|kl) = 2·h_{iα kβ lβ jα}`).
pub fn to_fcidump(ham: &SpinOrbitalHamiltonian) -> String {
    let n = ham.n_spatial;
    let mut out = String::new();
    let _ = writeln!(
        out,
        " &FCI NORB={},NELEC={},MS2={},",
        n,
        ham.n_electrons,
        ham.n_electrons % 2
    );
    let _ = writeln!(out, "  ORBSYM={}", vec!["1"; n].join(","));
    let _ = writeln!(out, "  ISYM=1,");
    let _ = writeln!(out, " &END");
    let pair = |a: usize, b: usize| a * (a + 1) / 2 + b;
    for i in 0..n {
        for j in 0..=i {
            for k in 0..n {
                for l in 0..=k {
                    if pair(k, l) > pair(i, j) {
                        continue;
                    }
                    let key = (i, k + n, l + n, j);
                    if let Some(v) = ham.two_body.get(&key) {
                        if *v != 0.0 {
                            let _ = writeln!(
                                out,
                                "{:.16e} {} {} {} {}",
                                2.0 * v,
                                i + 1,
                                j + 1,
                                k + 1,
                                l + 1
                            );
                        }
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..=i {
            if let Some(v) = ham.one_body.get(&(i, j)) {
                if *v != 0.0 {
                    let _ = writeln!(out, "{:.16e} {} {} 0 0", v, i + 1, j + 1);
                }
            }
        }
    }
    let _ = writeln!(out, "{:.16e} 0 0 0 0", ham.e_core);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_only_file() {
        let ham = parse_fcidump("&FCI NORB=1,NELEC=0,MS2=0,\n&END\n0.0 0 0 0 0\n").unwrap();
        assert_eq!(ham.e_core, 0.0);
        assert!(ham.one_body.is_empty() && ham.two_body.is_empty());
    }

    #[test]
    fn single_coefficient_expands_over_spin() {
        let ham = parse_fcidump("&FCI NORB=1,NELEC=2,MS2=0,\n&END\n-1.0 1 1 0 0\n").unwrap();
        assert_eq!(ham.one_body.len(), 2);
        assert_eq!(ham.one_body[&(0, 0)], -1.0);
        assert_eq!(ham.one_body[&(1, 1)], -1.0);
    }

    #[test]
    fn header_errors_name_the_line() {
        let err = parse_fcidump("\n&FCI NORB=x,NELEC=2\n&END\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_fcidump("&FCI NORB=2,NELEC=2\n&END\n0.5 1 3 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_fcidump("&FCI NORB=2,NELEC=2\n&END\n0.5 1 1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_fcidump("&FCI NORB=2,NELEC=2\n&END\nabc 1 1 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn multiline_header_and_fortran_exponent() {
        let text = " &FCI NORB=   2,NELEC= 2,MS2=0,\n  ORBSYM=1,1,\n  ISYM=1,\n /\n 1.5D-01 1 1 1 1\n";
        let ham = parse_fcidump(text).unwrap();
        assert_eq!(ham.n_spatial, 2);
        assert!((ham.two_body[&(0, 2, 2, 0)] - 0.075).abs() < 1e-16);
    }
}
