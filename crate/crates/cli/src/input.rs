//! Parsing of flag values and fixture files.

use std::fs;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde::de::DeserializeOwned;

use canontop::actions::{named_group, tau_fixtures, FiniteAction, FiniteGroup};
use canontop::{Coeff, CoeffGroup, RingDescriptor};

use crate::ActionArgs;

pub fn read_json<T: DeserializeOwned>(path: &str) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {path}"))
}

/// `free`, `free:a,b,c`, `zmod:N` or `mat:D:<ring>`.
pub fn ring(spec: &str) -> Result<RingDescriptor> {
    let bad = || anyhow!("unknown ring {spec:?}; expected free, zmod:N or mat:D:zmod:N");
    let parsed = match spec.split_once(':') {
        None if spec == "free" => RingDescriptor::free(["x", "y"]),
        Some(("free", gens)) => RingDescriptor::free(gens.split(',')),
        Some(("zmod", n)) => RingDescriptor::zmod(n.parse().map_err(|_| bad())?),
        Some(("mat", rest)) => {
            let (dim, base) = rest.split_once(':').ok_or_else(bad)?;
            RingDescriptor::matrix(ring(base)?, dim.parse().map_err(|_| bad())?)
        }
        _ => return Err(bad()),
    };
    Ok(parsed?)
}

pub fn finite_group(spec: &str) -> Result<(String, FiniteGroup)> {
    if let Some(path) = spec.strip_prefix("table:") {
        return Ok((spec.to_string(), read_json(path)?));
    }
    let g = named_group(spec).ok_or_else(|| anyhow!("unknown finite group {spec:?}"))?;
    Ok((spec.to_string(), g))
}

pub fn coeff_group(spec: &str) -> Result<Arc<CoeffGroup>> {
    if spec == "Z" {
        return Ok(Arc::new(CoeffGroup::Integers));
    }
    Ok(Arc::new(CoeffGroup::finite(finite_group(spec)?.1)))
}

pub fn coeff(group: &CoeffGroup, text: Option<&str>) -> Result<Coeff> {
    let text = text.unwrap_or("1");
    let c = match group {
        CoeffGroup::Integers => {
            Coeff::Int(text.parse().with_context(|| format!("integer {text:?}"))?)
        }
        CoeffGroup::Finite { .. } => Coeff::Elem(
            text.parse()
                .with_context(|| format!("element index {text:?}"))?,
        ),
    };
    group.check(&c)?;
    Ok(c)
}

pub fn action(args: &ActionArgs) -> Result<(String, FiniteAction)> {
    if let Some(path) = &args.fixture {
        return Ok((path.clone(), read_json(path)?));
    }
    let name = args.action.as_deref().unwrap_or_default();
    let all = tau_fixtures();
    match all.into_iter().find(|(n, _)| n == name) {
        Some(found) => Ok(found),
        None => {
            let names: Vec<String> = tau_fixtures().into_iter().map(|(n, _)| n).collect();
            bail!(
                "unknown action {name:?}; built-in actions: {}",
                names.join(", ")
            )
        }
    }
}
