//! Textual Mukai vectors: catalogue names `J`, `E0`, `E1`, shifts such as
//! `E0[1]`, or explicit components `(r,[c_1,...,c_n],s)`, `(r,0,s)` and
//! `r,c_1,...,c_n,s`.

use anyhow::{anyhow, bail, Context, Result};
use k3twist_core::scenario::{vector_e, vector_j};
use k3twist_core::{MukaiVector, Rational, Scenario};

fn rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| anyhow!("not a rational number: {:?}", s.trim()))
}

fn catalogue(name: &str, sc: &Scenario) -> Result<Option<MukaiVector>> {
    Ok(Some(match name {
        "J" => vector_j(sc)?,
        "E0" => vector_e(0, sc)?,
        "E1" => vector_e(1, sc)?,
        _ => return Ok(None),
    }))
}

pub fn parse_vector(spec: &str, sc: &Scenario) -> Result<MukaiVector> {
    let t = spec.trim();
    if let Some(v) = catalogue(t, sc)? {
        return Ok(v);
    }
    if let Some(base) = t.strip_suffix(']') {
        if let Some((name, shift)) = base.split_once('[') {
            if let Some(v) = catalogue(name, sc)? {
                let k: i64 = shift
                    .parse()
                    .with_context(|| format!("bad shift in {t:?}"))?;
                return Ok(if k.rem_euclid(2) == 1 { v.neg() } else { v });
            }
        }
    }
    let dim = sc.dim();
    let body = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(t);
    if let Some((r, rest)) = body.split_once('[') {
        let (list, s) = rest
            .split_once(']')
            .ok_or_else(|| anyhow!("unbalanced brackets in {t:?}"))?;
        let r = r.trim().trim_end_matches(',');
        let s = s.trim().trim_start_matches(',');
        let c: Vec<Rational> = list.split(',').map(rational).collect::<Result<_>>()?;
        if c.len() != dim {
            bail!("H^2 part has {} entries, expected {dim}", c.len());
        }
        return Ok(MukaiVector::new(rational(r)?, c, rational(s)?));
    }
    let parts: Vec<&str> = body.split(',').collect();
    match parts.len() {
        3 if parts[1].trim() == "0" => Ok(MukaiVector::new(
            rational(parts[0])?,
            vec![Rational::default(); dim],
            rational(parts[2])?,
        )),
        n if n == dim + 2 => {
            let xs: Vec<Rational> = parts.iter().map(|p| rational(p)).collect::<Result<_>>()?;
            Ok(MukaiVector::new(
                xs[0].clone(),
                xs[1..=dim].to_vec(),
                xs[dim + 1].clone(),
            ))
        }
        _ => bail!("unrecognized vector {t:?}"),
    }
}
