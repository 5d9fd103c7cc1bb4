//! Evaluation of parsed expressions to truncated series.
//!
//! Every value is an element of F[t]/(t^m); scalars are constants. When an
//! expression mentions `z` (or calls `rho`) the coefficient field F is ℚ(z).

use addilog::additive::{beta_embed, li_23, li_higher, li_mw};
use addilog::bloch::{ell, Wedge2};
use addilog::charp::{diagram_functional, finite_dilog, finite_log};
use addilog::chow::{chow_rho, qz, RatFunc, UniformizerSystem};
use addilog::{CoeffField, Error, FieldElem, TruncSeries};

use crate::error::CliError;
use crate::parse::{line_col, BinOp, Expr, ExprKind};

pub const FUNCTIONS: [(&str, &str); 14] = [
    ("li_mw", "li_mw(m, w, x)"),
    ("li_23", "li_23(x)"),
    ("li_higher", "li_higher(n, s, a)"),
    ("log", "log(x)"),
    ("exp", "exp(x)"),
    ("star", "star(λ, x)"),
    ("ell", "ell(i, x)"),
    ("wedge_eval", "wedge_eval(i, j, x, y)"),
    ("beta", "beta(a)"),
    ("finite_log", "finite_log(s)"),
    ("finite_dilog", "finite_dilog(x)"),
    ("diagram", "diagram(x)"),
    ("trace", "trace(s)"),
    ("rho", "rho(f, g, h)"),
];

/// True when the expression needs coefficients in ℚ(z).
pub fn needs_z(e: &Expr) -> bool {
    e.any_name(&|n| n == "z" || n == "rho")
}

pub struct Evaluator<'a> {
    src: &'a str,
    field: CoeffField,
    modulus: usize,
}

impl<'a> Evaluator<'a> {
    /// `base` is the user's field; it is replaced by ℚ(z) when `z_mode` is set.
    pub fn new(src: &'a str, base: &CoeffField, modulus: usize, z_mode: bool) -> Result<Evaluator<'a>, CliError> {
        if modulus == 0 {
            return Err(CliError::Usage("modulus must be at least 1".into()));
        }
        let field = if z_mode {
            if !base.is_rationals() {
                return Err(CliError::Usage(format!("rational functions in z need the field Q, not {base}")));
            }
            qz()
        } else {
            base.clone()
        };
        Ok(Evaluator { src, field, modulus })
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    fn unknown(&self, name: &str, e: &Expr) -> CliError {
        let (line, column) = line_col(self.src, e.span.start);
        CliError::UnknownIdentifier { name: name.to_string(), line, column }
    }

    fn constant(&self, c: FieldElem) -> TruncSeries {
        TruncSeries::constant(c, self.modulus)
    }

    pub fn eval(&self, e: &Expr) -> Result<TruncSeries, CliError> {
        Ok(match &e.kind {
            ExprKind::Int(n) => self.constant(self.field.from_bigint(n)),
            ExprKind::Ident(name) => self.ident(name, e)?,
            ExprKind::Neg(a) => self.eval(a)?.neg(),
            ExprKind::Bin(op, a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                match op {
                    BinOp::Add => x.checked_add(&y)?,
                    BinOp::Sub => x.checked_sub(&y)?,
                    BinOp::Mul => x.checked_mul(&y)?,
                    BinOp::Div => x.checked_div(&y)?,
                }
            }
            ExprKind::Pow(a, k) => self.eval(a)?.pow(*k)?,
            ExprKind::Call(name, args) => self.call(name, args, e)?,
        })
    }

    fn ident(&self, name: &str, e: &Expr) -> Result<TruncSeries, CliError> {
        if name == "t" {
            return Ok(TruncSeries::t(&self.field, self.modulus));
        }
        match (self.field.gen_name(), self.field.gen()) {
            (Some(g), Some(x)) if g == name => Ok(self.constant(x)),
            _ => Err(self.unknown(name, e)),
        }
    }

    fn scalar(&self, e: &Expr) -> Result<FieldElem, CliError> {
        let v = self.eval(e)?;
        if !v.is_constant() {
            return Err(CliError::Usage(format!("{e} must be a constant, got {v}")));
        }
        Ok(v.constant_term().clone())
    }

    fn index(&self, e: &Expr) -> Result<usize, CliError> {
        match &e.kind {
            ExprKind::Int(n) => usize::try_from(n).map_err(|_| CliError::Usage(format!("{n} is too large"))),
            _ => Err(CliError::Usage(format!("{e} must be a nonnegative integer literal"))),
        }
    }

    fn at_modulus(&self, x: TruncSeries, m: usize) -> Result<TruncSeries, CliError> {
        if x.modulus() < m {
            return Err(Error::PrecisionTooLow { got: x.modulus(), need: m }.into());
        }
        Ok(x.truncate(m))
    }

    fn ratfunc(&self, e: &Expr) -> Result<RatFunc, CliError> {
        Ok(RatFunc::new(self.eval(e)?)?)
    }

    fn call(&self, name: &str, args: &[Expr], e: &Expr) -> Result<TruncSeries, CliError> {
        let Some((_, usage)) = FUNCTIONS.iter().find(|(n, _)| *n == name) else {
            return Err(self.unknown(name, e));
        };
        let arity = usage.matches(',').count() + 1;
        if args.len() != arity {
            return Err(CliError::Usage(format!("{name} takes {arity} arguments: {usage}")));
        }
        let c = |v: FieldElem| Ok(self.constant(v));
        match name {
            "li_mw" => {
                let (m, w) = (self.index(&args[0])?, self.index(&args[1])?);
                let x = self.at_modulus(self.eval(&args[2])?, m)?;
                c(li_mw(m, w, &x)?)
            }
            "li_23" => c(li_23(&self.at_modulus(self.eval(&args[0])?, 2)?)?),
            "li_higher" => {
                let n = self.index(&args[0])?;
                c(li_higher(n, &self.scalar(&args[1])?, &self.scalar(&args[2])?)?)
            }
            "log" => Ok(self.eval(&args[0])?.log_circ()?),
            "exp" => Ok(self.eval(&args[0])?.exp_nil()?),
            "star" => Ok(self.eval(&args[1])?.star_scale(&self.scalar(&args[0])?)?),
            "ell" => c(ell(self.index(&args[0])?, &self.eval(&args[1])?)?),
            "wedge_eval" => {
                let (i, j) = (self.index(&args[0])?, self.index(&args[1])?);
                let w = Wedge2::pair(&self.eval(&args[2])?, &self.eval(&args[3])?)?;
                c(w.wedge_eval(i, j)?)
            }
            "beta" => Ok(beta_embed(&self.scalar(&args[0])?)?),
            "finite_log" => c(finite_log(&self.scalar(&args[0])?)?),
            "finite_dilog" => c(finite_dilog(&self.at_modulus(self.eval(&args[0])?, 2)?)?),
            "diagram" => {
                let p = self.field.characteristic() as usize;
                if p == 0 {
                    return Err(Error::UnsupportedField(self.field.to_string()).into());
                }
                c(diagram_functional(&self.at_modulus(self.eval(&args[0])?, p)?)?)
            }
            "trace" => c(self.scalar(&args[0])?.trace()?),
            "rho" => {
                let (f, g, h) = (self.ratfunc(&args[0])?, self.ratfunc(&args[1])?, self.ratfunc(&args[2])?);
                let v = chow_rho(&f, &g, &h, &UniformizerSystem::default())?;
                c(self.field.from_q(&v)?)
            }
            _ => unreachable!("every listed function is handled"),
        }
    }
}

/// Constants print as scalars.
pub fn render(v: &TruncSeries) -> String {
    if v.is_constant() {
        v.constant_term().to_string()
    } else {
        v.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use addilog::kernel::qpoly::q;

    fn run(src: &str, field: &CoeffField, m: usize) -> Result<String, CliError> {
        let e = parse(src)?;
        let ev = Evaluator::new(src, field, m, needs_z(&e))?;
        Ok(render(&ev.eval(&e)?))
    }

    #[test]
    fn pinned_values() {
        let q = CoeffField::rationals();
        assert_eq!(run("li_23(1/2 + t)", &q, 6).unwrap(), "-8");
        assert_eq!(run("li_mw(2,3, 1/2 + t)", &q, 3).unwrap(), "-8");
        assert_eq!(run("li_higher(2, 1/2, 1)", &q, 3).unwrap(), "-8");
        assert_eq!(run("rho(1-z, z, 1 - (1/2 + t)/z)", &q, 4).unwrap(), "-8");
    }

    #[test]
    fn field_generators() {
        let k = CoeffField::number_field(&[q(-2), q(0), q(1)], "θ").unwrap();
        assert_eq!(run("θ^2", &k, 3).unwrap(), "2");
        assert_eq!(run("trace(θ + 3)", &k, 3).unwrap(), "6");
        let f5 = CoeffField::finite(5, 1, "θ").unwrap();
        assert_eq!(run("finite_log(2)", &f5, 5).unwrap(), run("finite_log(1 - 2)", &f5, 5).unwrap());
    }

    #[test]
    fn unknown_names() {
        let q = CoeffField::rationals();
        assert!(matches!(run("1 + y", &q, 3), Err(CliError::UnknownIdentifier { column: 5, .. })));
        assert!(matches!(run("foo(t)", &q, 3), Err(CliError::UnknownIdentifier { column: 1, .. })));
        assert!(matches!(run("li_mw(4, 5, t)", &q, 3), Err(CliError::Core(Error::PrecisionTooLow { .. }))));
    }
}
