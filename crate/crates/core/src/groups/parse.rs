//! Group-spec grammar:
//!
//! ```text
//! spec  := term ("*" term)*
//! term  := atom ("^" INT)*
//! atom  := "Z" INT ["[" INT ("," INT)* "]"]
//!        | "F" INT
//!        | "table:" PATH
//!        | "freepow(" spec "," BIGINT ")"
//!        | "dprod(" spec ("," spec)* ")"
//!        | "(" spec ")"
//! BIGINT := INT ["^" INT]            e.g. 10^84
//! ```

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{FiniteTable, GroupSpec};
use crate::error::{Error, Result};

pub(super) fn parse_spec(input: &str) -> Result<GroupSpec> {
    let mut p = Parser { input, pos: 0 };
    let spec = p.spec()?;
    p.skip_ws();
    if p.pos < input.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(spec)
}

/// Parses `INT` or `INT^INT` into a big integer.
pub fn parse_bigint(input: &str) -> Result<BigUint> {
    let mut p = Parser { input, pos: 0 };
    let n = p.bigint()?;
    p.skip_ws();
    if p.pos < input.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(n)
}

/// Powers of ten from 10^6 upward print as `10^k`; everything else in decimal.
pub fn format_bigint(n: &BigUint) -> String {
    let s = n.to_string();
    let k = s.len() - 1;
    if k >= 6 && s.starts_with('1') && s[1..].bytes().all(|b| b == b'0') {
        format!("10^{k}")
    } else {
        s
    }
}

struct Parser<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.input, self.pos, msg)
    }

    fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.input.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected {token:?}")))
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(|b| b.is_ascii_digit()).count();
        if len == 0 {
            return Err(self.error("expected an integer"));
        }
        let s = &self.rest()[..len];
        self.pos += len;
        Ok(s)
    }

    fn int<T: std::str::FromStr>(&mut self) -> Result<T> {
        let start = self.pos;
        let s = self.digits()?;
        s.parse().map_err(|_| {
            self.pos = start;
            self.error(format!("integer {s} out of range"))
        })
    }

    fn bigint(&mut self) -> Result<BigUint> {
        let base: BigUint = self.digits()?.parse().expect("digits");
        if self.eat("^") {
            let exp: u32 = self.int()?;
            Ok(num_traits::pow(base, exp as usize))
        } else {
            Ok(base)
        }
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        let mut terms = vec![self.term()?];
        while self.eat("*") {
            terms.push(self.term()?);
        }
        if terms.len() == 1 {
            return Ok(terms.pop().expect("one term"));
        }
        let mut factors = Vec::new();
        for t in terms {
            match t {
                GroupSpec::FreeProduct(fs) => factors.extend(fs.into_iter().map(|f| (f.group, f.copies))),
                g => factors.push((g, BigUint::one())),
            }
        }
        GroupSpec::free_product(factors)
    }

    fn term(&mut self) -> Result<GroupSpec> {
        let mut g = self.atom()?;
        while self.eat("^") {
            let start = self.pos;
            let k: usize = self.int()?;
            g = GroupSpec::direct_power(g, k).map_err(|e| {
                self.pos = start;
                self.error(e.to_string())
            })?;
        }
        Ok(g)
    }

    fn atom(&mut self) -> Result<GroupSpec> {
        self.skip_ws();
        let start = self.pos;
        if self.eat("freepow(") {
            let g = self.spec()?;
            self.expect(",")?;
            self.skip_ws();
            let at = self.pos;
            let copies = self.bigint()?;
            if copies.is_zero() {
                self.pos = at;
                return Err(self.error("multiplicity must be positive"));
            }
            self.expect(")")?;
            return GroupSpec::free_power(g, copies);
        }
        if self.eat("dprod(") {
            let mut fs = vec![self.spec()?];
            while self.eat(",") {
                fs.push(self.spec()?);
            }
            self.expect(")")?;
            return GroupSpec::direct_product(fs);
        }
        if self.eat("table:") {
            let len = self
                .rest()
                .find(|c: char| c == '*' || c == ')' || c == '^' || c == ',' || c.is_whitespace())
                .unwrap_or(self.rest().len());
            if len == 0 {
                return Err(self.error("expected a table path"));
            }
            let path = &self.rest()[..len];
            let table = FiniteTable::load(path).map_err(|e| self.error(format!("cannot load table: {e}")))?;
            self.pos += len;
            return Ok(GroupSpec::table(table));
        }
        if self.eat("(") {
            let g = self.spec()?;
            self.expect(")")?;
            return Ok(g);
        }
        if self.eat("Z") {
            let order: u64 = self.int()?;
            if order == 0 {
                self.pos = start + 1;
                return Err(self.error("cyclic order must be positive"));
            }
            if self.eat("[") {
                let mut gens = vec![self.int()?];
                while self.eat(",") {
                    gens.push(self.int()?);
                }
                self.expect("]")?;
                return GroupSpec::cyclic_with(order, gens).map_err(|e| {
                    self.pos = start;
                    self.error(e.to_string())
                });
            }
            return Ok(GroupSpec::cyclic(order));
        }
        if self.eat("F") {
            let rank: u64 = self.int()?;
            if rank == 0 {
                self.pos = start + 1;
                return Err(self.error("free rank must be positive"));
            }
            return Ok(GroupSpec::free(rank));
        }
        Err(self.error("expected a group (Z<n>, F<n>, table:<path>, freepow(..), dprod(..) or '(')"))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic { order, generators } => {
                let default: &[u64] = if *order > 1 { &[1] } else { &[] };
                if generators == default {
                    write!(f, "Z{order}")
                } else {
                    let g: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
                    write!(f, "Z{order}[{}]", g.join(","))
                }
            }
            GroupSpec::Table(t) => write!(f, "table:{}", t.source().unwrap_or("<inline>")),
            GroupSpec::Free { rank } => write!(f, "F{rank}"),
            GroupSpec::FreeProduct(fs) => {
                if fs.len() == 1 {
                    let only = &fs[0];
                    return write!(f, "freepow({},{})", only.group, format_bigint(&only.copies));
                }
                for (i, fac) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    if fac.copies.is_one() {
                        match fac.group {
                            GroupSpec::FreeProduct(_) => write!(f, "({})", fac.group)?,
                            _ => write!(f, "{}", fac.group)?,
                        }
                    } else {
                        write!(f, "freepow({},{})", fac.group, format_bigint(&fac.copies))?;
                    }
                }
                Ok(())
            }
            GroupSpec::DirectPower { base, exponent } => match **base {
                GroupSpec::FreeProduct(ref fs) if fs.len() > 1 => write!(f, "({base})^{exponent}"),
                _ => write!(f, "{base}^{exponent}"),
            },
            GroupSpec::DirectProduct(fs) => {
                let parts: Vec<String> = fs.iter().map(|g| g.to_string()).collect();
                write!(f, "dprod({})", parts.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_atoms() {
        assert_eq!(parse_spec("Z5").unwrap(), GroupSpec::cyclic(5));
        assert_eq!(parse_spec(" F2 ").unwrap(), GroupSpec::free(2));
        assert_eq!(
            parse_spec("Z4[1,2,3]").unwrap(),
            GroupSpec::cyclic_with(4, vec![1, 2, 3]).unwrap()
        );
    }

    #[test]
    fn free_products_merge_equal_neighbours() {
        let g = parse_spec("Z5*Z5*Z5").unwrap();
        assert_eq!(g, GroupSpec::free_power(GroupSpec::cyclic(5), 3u32).unwrap());
        assert_eq!(g.to_string(), "freepow(Z5,3)");
        let h = parse_spec("Z5 * F2 * Z5").unwrap();
        assert_eq!(h.to_string(), "Z5*F2*Z5");
    }

    #[test]
    fn symbolic_multiplicity() {
        let g = parse_spec("freepow(Z5, 10^84)").unwrap();
        let GroupSpec::FreeProduct(fs) = &g else { panic!() };
        assert_eq!(fs[0].copies, num_traits::pow(BigUint::from(10u32), 84));
        assert_eq!(g.to_string(), "freepow(Z5,10^84)");
    }

    #[test]
    fn powers_and_products() {
        let g = parse_spec("Z3^3").unwrap();
        assert_eq!(g, GroupSpec::direct_power(GroupSpec::cyclic(3), 3).unwrap());
        let g = parse_spec("(Z2*Z3)^2").unwrap();
        assert_eq!(g.to_string(), "(Z2*Z3)^2");
        let g = parse_spec("dprod(Z5,Z7)").unwrap();
        assert_eq!(g.to_string(), "dprod(Z5,Z7)");
    }

    #[test]
    fn canonical_round_trip() {
        for s in [
            "Z5",
            "F3",
            "Z4[1,2,3]",
            "freepow(Z5,3)",
            "freepow(Z5,1)",
            "Z3*Z4*F2",
            "freepow(Z5,10^84)*Z7",
            "(Z2*Z3)^2",
            "Z3^3",
            "dprod(Z5,Z7^2)",
            "freepow(Z2*Z3,4)",
        ] {
            let g = parse_spec(s).unwrap();
            let again = parse_spec(&g.canonical()).unwrap();
            assert_eq!(g, again, "{s} -> {}", g.canonical());
        }
    }

    #[test]
    fn errors_carry_positions() {
        match parse_spec("Z5 * Q7") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        match parse_spec("freepow(Z5, 0)") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 12),
            other => panic!("{other:?}"),
        }
        assert!(parse_spec("Z5)").is_err());
        assert!(parse_spec("Z0").is_err());
        assert!(parse_spec("").is_err());
    }

    #[test]
    fn bigint_notation() {
        assert_eq!(parse_bigint("10^3").unwrap(), BigUint::from(1000u32));
        assert_eq!(parse_bigint("42").unwrap(), BigUint::from(42u32));
        assert_eq!(format_bigint(&BigUint::from(1_000_000u32)), "10^6");
        assert_eq!(format_bigint(&BigUint::from(1000u32)), "1000");
    }
}
