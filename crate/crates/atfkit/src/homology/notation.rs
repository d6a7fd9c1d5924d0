//! Text form of classes: "3H-2E1-E4", "A+2B", "E" in X₁.

use super::{HomologyClass, HomologyError, IntersectionSpace};

pub(super) fn print(x: &HomologyClass) -> String {
    let mut out = String::new();
    for (i, &c) in x.coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
        let mag = c.unsigned_abs();
        let coeff = if mag == 1 { String::new() } else { mag.to_string() };
        out.push_str(&format!("{sign}{coeff}{}", x.space.basis_name(i)));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn symbol_index(space: IntersectionSpace, sym: &str) -> Option<usize> {
    match (space, sym) {
        (IntersectionSpace::S2xS2, "A") => Some(0),
        (IntersectionSpace::S2xS2, "B") => Some(1),
        (IntersectionSpace::Blowup(_), "H") => Some(0),
        (IntersectionSpace::Blowup(1), "E") => Some(1),
        (IntersectionSpace::Blowup(n), s) if s.starts_with('E') => {
            let i: usize = s[1..].parse().ok()?;
            (1..=n).contains(&i).then_some(i)
        }
        _ => None,
    }
}

pub(super) fn parse(space: IntersectionSpace, s: &str) -> Result<HomologyClass, HomologyError> {
    let err = || HomologyError::Parse(s.to_string());
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('−', "-");
    let mut coeffs = vec![0i64; space.dim()];
    if src == "0" {
        return Ok(HomologyClass::new(space, coeffs));
    }
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0;
    if bytes.is_empty() {
        return Err(err());
    }
    while i < bytes.len() {
        let mut sign = 1i64;
        if bytes[i] == '+' || bytes[i] == '-' {
            if bytes[i] == '-' {
                sign = -1;
            }
            i += 1;
        } else if i > 0 {
            return Err(err());
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let mag: i64 = if i == start {
            1
        } else {
            bytes[start..i].iter().collect::<String>().parse().map_err(|_| err())?
        };
        if i >= bytes.len() || !bytes[i].is_ascii_alphabetic() {
            return Err(err());
        }
        let sym_start = i;
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let sym: String = bytes[sym_start..i].iter().collect();
        let idx = symbol_index(space, &sym).ok_or_else(err)?;
        coeffs[idx] += sign * mag;
    }
    Ok(HomologyClass::new(space, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let x4 = IntersectionSpace::Blowup(4);
        let c = parse(x4, "3H-2E1-E4").unwrap();
        assert_eq!(c.coeffs, vec![3, -2, 0, 0, -1]);
        assert_eq!(print(&c), "3H-2E1-E4");
        let ab = parse(IntersectionSpace::S2xS2, "A+2B").unwrap();
        assert_eq!(print(&ab), "A+2B");
        let x1 = IntersectionSpace::Blowup(1);
        assert_eq!(print(&parse(x1, "2H+3E").unwrap()), "2H+3E");
        assert_eq!(parse(x1, "E1").unwrap(), parse(x1, "E").unwrap());
        assert_eq!(print(&HomologyClass::zero(x4)), "0");
        assert_eq!(parse(x4, "-H + E1").unwrap().coeffs, vec![-1, 1, 0, 0, 0]);
    }

    #[test]
    fn rejects_garbage() {
        let x2 = IntersectionSpace::Blowup(2);
        for bad in ["", "3", "H+", "E3", "A", "2HH", "H E1x"] {
            assert!(parse(x2, bad).is_err(), "{bad}");
        }
    }
}
