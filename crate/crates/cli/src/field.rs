//! Field strings: `Q`, `Q(x)`, `Q[θ]/(θ^2-2)`, `F5`, `F25`, `F25:θ^2+θ+1`.

use addilog::kernel::qpoly;
use addilog::{CoeffField, Q};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::CliError;
use crate::parse::{parse, BinOp, Expr, ExprKind};

fn bad(s: &str, why: &str) -> CliError {
    CliError::Usage(format!("cannot read field '{s}': {why}"))
}

/// Coefficients of a polynomial expression in `var` over ℚ.
pub fn to_qpoly(e: &Expr, var: &str) -> Result<Vec<Q>, CliError> {
    let err = |why: String| CliError::Usage(format!("{e} is not a polynomial in {var}: {why}"));
    Ok(match &e.kind {
        ExprKind::Int(n) => qpoly::trim(vec![Q::from_integer(n.clone())]),
        ExprKind::Ident(v) if v == var => vec![Q::zero(), qpoly::q(1)],
        ExprKind::Ident(v) => return Err(err(format!("unexpected name {v}"))),
        ExprKind::Call(f, _) => return Err(err(format!("unexpected call to {f}"))),
        ExprKind::Neg(a) => qpoly::neg(&to_qpoly(a, var)?),
        ExprKind::Pow(a, k) => {
            let k = usize::try_from(*k).map_err(|_| err("negative exponent".into()))?;
            let base = to_qpoly(a, var)?;
            (0..k).fold(vec![qpoly::q(1)], |acc, _| qpoly::mul(&acc, &base))
        }
        ExprKind::Bin(op, a, b) => {
            let (x, y) = (to_qpoly(a, var)?, to_qpoly(b, var)?);
            match op {
                BinOp::Add => qpoly::add(&x, &y),
                BinOp::Sub => qpoly::sub(&x, &y),
                BinOp::Mul => qpoly::mul(&x, &y),
                BinOp::Div => match y.as_slice() {
                    [c] => qpoly::scale(&x, &c.recip()),
                    _ => return Err(err("division by a non-constant".into())),
                },
            }
        }
    })
}

fn single_name(e: &Expr) -> Option<String> {
    match &e.kind {
        ExprKind::Ident(v) => Some(v.clone()),
        ExprKind::Neg(a) | ExprKind::Pow(a, _) => single_name(a),
        ExprKind::Bin(_, a, b) => single_name(a).or_else(|| single_name(b)),
        _ => None,
    }
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

fn mod_p(c: &Q, p: u64) -> Result<u64, CliError> {
    let pb = BigInt::from(p);
    let d = c.denom().modpow(&(&pb - 2u32), &pb);
    if d.is_zero() {
        return Err(CliError::Usage(format!("{c} has no value modulo {p}")));
    }
    let v = (c.numer() * d % &pb + &pb) % &pb;
    Ok(v.to_u64().expect("residue fits"))
}

pub fn parse_field(s: &str) -> Result<CoeffField, CliError> {
    let t = s.trim();
    if t == "Q" {
        return Ok(CoeffField::rationals());
    }
    if let Some(v) = t.strip_prefix("Q(").and_then(|r| r.strip_suffix(')')) {
        return Ok(CoeffField::function_field(&CoeffField::rationals(), v.trim())?);
    }
    if let Some(rest) = t.strip_prefix("Q[") {
        let (var, m) = rest.split_once(']').ok_or_else(|| bad(s, "missing ']'"))?;
        let m = m.trim().strip_prefix('/').ok_or_else(|| bad(s, "expected '/' after the generator"))?;
        let modulus = to_qpoly(&parse(m)?, var.trim())?;
        return Ok(CoeffField::number_field(&modulus, var.trim())?);
    }
    if let Some(rest) = t.strip_prefix('F') {
        let (q, m) = match rest.split_once(':') {
            Some((q, m)) => (q, Some(m)),
            None => (rest, None),
        };
        let q: u64 = q.trim().parse().map_err(|_| bad(s, "expected a prime power after F"))?;
        let (p, e) = prime_power(q).ok_or_else(|| bad(s, "order is not a prime power"))?;
        let Some(m) = m else {
            return Ok(CoeffField::finite(p, e, "θ")?);
        };
        let expr = parse(m)?;
        let var = single_name(&expr).ok_or_else(|| bad(s, "modulus has no variable"))?;
        let coeffs = to_qpoly(&expr, &var)?.iter().map(|c| mod_p(c, p)).collect::<Result<Vec<_>, _>>()?;
        if coeffs.len() != e as usize + 1 {
            return Err(bad(s, &format!("modulus must have degree {e}")));
        }
        return Ok(CoeffField::finite_with_modulus(p, &coeffs, &var)?);
    }
    Err(bad(s, "expected Q, Q(x), Q[θ]/(...), Fq or Fq:modulus"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recognised_forms() {
        assert!(parse_field("Q").unwrap().is_rationals());
        assert!(parse_field("Q(x)").unwrap().is_function_field());
        assert_eq!(parse_field("Q[θ]/(θ^2-2)").unwrap().degree(), Some(2));
        assert_eq!(parse_field("F5").unwrap().order(), Some(5));
        let f = parse_field("F25:θ^2+θ+1").unwrap();
        assert_eq!(f.order(), Some(25));
        assert_eq!(f.gen_name(), Some("θ"));
        assert_eq!(parse_field("F49").unwrap().characteristic(), 7);
    }

    #[test]
    fn rejected_forms() {
        for s in ["R", "F6", "F25:θ+1", "Q[θ]/(θ^2", "F5:2"] {
            assert!(parse_field(s).is_err(), "{s}");
        }
    }
}
