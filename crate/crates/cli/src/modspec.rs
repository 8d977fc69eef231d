//! Module names on the command line: `trivial`, `g`, `ZG`, `P`, `relmod`,
//! optionally under a functor power as in `S2:g` or `Lie3:relmod`.

use frlab::frlang::{functor_power, Functor};
use frlab::gmodule::GroupRef;
use frlab::relmod::relation_module;
use frlab::{Error, GModule};

use crate::Failure;

fn base(name: &str, pg: &GroupRef) -> Result<GModule, Error> {
    match name {
        "trivial" | "Z" => Ok(GModule::trivial(pg.clone())),
        "g" | "aug" => GModule::augmentation_ideal(pg.clone()),
        "ZG" | "regular" => GModule::regular(pg.clone()),
        "P" | "free" => GModule::free(pg.clone(), pg.generator_count()),
        "relmod" | "R" => Ok(relation_module(pg)?.module),
        _ => Err(Error::Invalid(format!("unknown module {name:?} (expected trivial, g, ZG, P or relmod)"))),
    }
}

/// `S2`, `Ex:2`, `Lie3` and so on.
pub fn functor_arg(text: &str) -> Result<(Functor, usize), Failure> {
    let split = text.find(|c: char| c.is_ascii_digit()).ok_or_else(|| Failure::from(Error::Invalid(format!("missing degree in {text:?}"))))?;
    let name = text[..split].trim_end_matches(':');
    let n = text[split..].parse::<usize>().map_err(|_| Error::Invalid(format!("bad degree in {text:?}")))?;
    Ok((name.parse()?, n))
}

pub fn build(spec: &str, pg: &GroupRef) -> Result<GModule, Failure> {
    match spec.rsplit_once(':') {
        Some((f, b)) if f.chars().any(|c| c.is_ascii_digit()) => {
            let (f, n) = functor_arg(f)?;
            Ok(functor_power(&base(b, pg)?, f, n)?)
        }
        _ => Ok(base(spec, pg)?),
    }
}
