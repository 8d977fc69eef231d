//! Module codes: functor powers of the relation module and of the ideal `r`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::ast::{Bindings, Index, Parser};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Functor {
    Tensor,
    Sym,
    Ext,
    Gamma,
    Lie,
}

impl Functor {
    pub fn name(self) -> &'static str {
        match self {
            Functor::Tensor => "T",
            Functor::Sym => "S",
            Functor::Ext => "Ex",
            Functor::Gamma => "Gamma",
            Functor::Lie => "Lie",
        }
    }
}

impl FromStr for Functor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "T" => Functor::Tensor,
            "S" => Functor::Sym,
            "Ex" | "Λ" => Functor::Ext,
            "Gamma" | "Γ" => Functor::Gamma,
            "Lie" => Functor::Lie,
            _ => return Err(Error::Invalid(format!("unknown functor {s:?} (expected T, S, Ex, Gamma or Lie)"))),
        })
    }
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuleCode {
    /// `coinv(FUNC^n(R))`: coinvariants of a functor power of `R_ab`.
    /// The first power of any functor is stored as `T^1`.
    Coinv { functor: Functor, power: Index },
    /// `FUNC^n(r)`: a functor power of the ideal `r` as an abelian group.
    OfIdeal { functor: Functor, power: Index },
    /// `H_n(F/gamma_2(R))`.
    FreeMetabelianHomology { degree: Index },
}

impl Serialize for ModuleCode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl ModuleCode {
    pub fn is_concrete(&self) -> bool {
        let mut vs = BTreeSet::new();
        self.vars(&mut vs);
        vs.is_empty()
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            ModuleCode::Coinv { power, .. } | ModuleCode::OfIdeal { power, .. } => power.vars(out),
            ModuleCode::FreeMetabelianHomology { degree } => degree.vars(out),
        }
    }

    pub fn subst(&self, b: &Bindings) -> Self {
        match self {
            ModuleCode::Coinv { functor, power } => ModuleCode::Coinv { functor: *functor, power: power.subst(b) },
            ModuleCode::OfIdeal { functor, power } => ModuleCode::OfIdeal { functor: *functor, power: power.subst(b) },
            ModuleCode::FreeMetabelianHomology { degree } => ModuleCode::FreeMetabelianHomology { degree: degree.subst(b) },
        }
        .normalized()
    }

    fn normalized(self) -> Self {
        match self {
            ModuleCode::Coinv { power: Index::Num(1), .. } => {
                ModuleCode::Coinv { functor: Functor::Tensor, power: Index::Num(1) }
            }
            other => other,
        }
    }
}

impl fmt::Display for ModuleCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let attached = |e: &Index| if e.as_num().is_some() || matches!(e, Index::Var(_)) { e.to_string() } else { format!("({e})") };
        match self {
            ModuleCode::Coinv { power: Index::Num(1), .. } => write!(f, "coinv(R)"),
            ModuleCode::Coinv { functor, power } => write!(f, "coinv({functor}^{}(R))", attached(power)),
            ModuleCode::OfIdeal { functor, power } => write!(f, "{functor}^{}(r)", attached(power)),
            ModuleCode::FreeMetabelianHomology { degree } => write!(f, "H_{}(F/gamma_2(R))", attached(degree)),
        }
    }
}

/// Tells module codes apart from fr-codes by their first character.
pub fn looks_like_module_code(text: &str) -> bool {
    let t = text.trim_start();
    t.starts_with("coinv") || t.starts_with(|c: char| c.is_ascii_uppercase() || c == 'Λ' || c == 'Γ')
}

pub fn parse_module_code(text: &str) -> Result<ModuleCode> {
    parse_with(text, false)
}

pub fn parse_module_pattern(text: &str) -> Result<ModuleCode> {
    parse_with(text, true)
}

fn parse_with(text: &str, pattern: bool) -> Result<ModuleCode> {
    let mut p = Parser::new(text, pattern);
    let code = if p.eat_keyword("coinv") {
        p.expect('(')?;
        let c = if p.peek() == Some('R') {
            p.pos += 1;
            ModuleCode::Coinv { functor: Functor::Tensor, power: Index::Num(1) }
        } else {
            let (functor, power) = functor_power(&mut p)?;
            p.expect('(')?;
            p.expect('R')?;
            p.expect(')')?;
            ModuleCode::Coinv { functor, power }
        };
        p.expect(')')?;
        c
    } else if p.eat_keyword("H_") {
        let degree = p.attached_index("degree")?;
        for kw in ["(", "F", "/", "gamma_2", "(", "R", ")", ")"] {
            if !p.eat_keyword(kw) {
                return Err(p.err(format!("expected {kw:?} in H_n(F/gamma_2(R))")));
            }
        }
        ModuleCode::FreeMetabelianHomology { degree }
    } else {
        let (functor, power) = functor_power(&mut p)?;
        p.expect('(')?;
        p.expect('r')?;
        p.expect(')')?;
        ModuleCode::OfIdeal { functor, power }
    };
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(code.normalized())
}

fn functor_power(p: &mut Parser) -> Result<(Functor, Index)> {
    p.skip_ws();
    let start = p.pos;
    while p.pos < p.chars.len() && (p.chars[p.pos].is_alphabetic()) {
        p.pos += 1;
    }
    let name: String = p.chars[start..p.pos].iter().collect();
    let functor = name.parse::<Functor>().map_err(|_| Error::Parse { pos: start, msg: format!("unknown functor {name:?}") })?;
    p.expect('^')?;
    let power = p.attached_index("power")?;
    Ok((functor, power))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for t in ["coinv(Ex^2(R))", "coinv(Lie^3(R))", "Ex^3(r)", "Gamma^2(r)", "coinv(R)", "H_5(F/gamma_2(R))"] {
            let c = parse_module_code(t).unwrap();
            assert_eq!(c.to_string(), t);
        }
        assert_eq!(parse_module_code("coinv(S^1(R))").unwrap().to_string(), "coinv(R)");
        assert_eq!(
            parse_module_code("coinv( Ex ^ 2 ( R ) )").unwrap(),
            ModuleCode::Coinv { functor: Functor::Ext, power: Index::Num(2) }
        );
        assert!(parse_module_code("coinv(Foo^2(R))").is_err());
        assert!(parse_module_code("Ex^n(r)").is_err());
        let p = parse_module_pattern("coinv(Ex^(t*p)(R))").unwrap();
        assert_eq!(parse_module_pattern(&p.to_string()).unwrap(), p);
        assert!(looks_like_module_code("Ex^2(r)"));
        assert!(!looks_like_module_code("r f + f r"));
    }
}
