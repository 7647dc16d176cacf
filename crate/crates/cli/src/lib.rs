//! Library side of the `k3twist` command: scenario files, vector specs, the
//! verification battery and the individual subcommands.

pub mod battery;
pub mod parallel;
pub mod report;
pub mod scenario_file;
pub mod vector_spec;

use anyhow::{bail, Context, Result};
use k3twist_core::lattice::{represents, Gram};
use k3twist_core::scenario::{chi_p2, TwistProfile};
use k3twist_core::stability::{wall_between, ChargeParams};
use k3twist_core::{QuadExt, Scenario};
use serde_json::{json, Value};

use crate::report::Report;

/// Result of a data subcommand: the human-readable text plus the JSON document.
#[derive(Clone, Debug)]
pub struct Output {
    pub text: String,
    pub report: Report,
}

impl Output {
    fn new(text: String, data: Value) -> Self {
        Output {
            text,
            report: Report::with_data(data),
        }
    }

    pub fn render(&self, json_out: bool) -> String {
        if json_out {
            let mut s = self.report.to_json();
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

fn ordering_name(o: std::cmp::Ordering) -> &'static str {
    match o {
        std::cmp::Ordering::Less => "less",
        std::cmp::Ordering::Equal => "equal",
        std::cmp::Ordering::Greater => "greater",
    }
}

pub fn walls(sc: &Scenario, v_spec: &str, w_spec: &str) -> Result<Output> {
    let v = vector_spec::parse_vector(v_spec, sc).context("--v")?;
    let w = vector_spec::parse_vector(w_spec, sc).context("--w")?;
    let p = ChargeParams::new(sc)?;
    let r = wall_between(&p, &v, &w)?;
    let roots: Vec<String> = r.roots.iter().map(QuadExt::compact).collect();
    let mut text = format!("walls: [{}]\n", roots.join(", "));
    let mut chambers = Vec::new();
    for c in &r.chambers {
        let upper = c.upper.as_ref().map(|u| u.compact());
        let ord = c.ordering.map(ordering_name).unwrap_or("undefined");
        text.push_str(&format!(
            "  ({}, {}): phase(v) {} phase(w) at m = {}\n",
            c.lower.compact(),
            upper.as_deref().unwrap_or("inf"),
            ord,
            c.sample
        ));
        chambers.push(json!({
            "lower": c.lower.to_string(),
            "upper": c.upper.as_ref().map(|u| u.to_string()),
            "sample": c.sample.to_string(),
            "ordering": ord,
        }));
    }
    let data = json!({
        "v": v.to_string(),
        "w": w.to_string(),
        "walls": r.roots.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "chambers": chambers,
    });
    Ok(Output::new(text, data))
}

pub fn scan(sc: &Scenario, v_spec: &str, m: &str, bound: u32, jobs: usize) -> Result<Output> {
    let v = vector_spec::parse_vector(v_spec, sc).context("--v")?;
    let m: QuadExt = m.parse().with_context(|| format!("--m {m:?}"))?;
    let p = ChargeParams::new(sc)?;
    let found = parallel::parallel_scan(&p, &v, &m, bound, jobs)?;
    let mut text = format!(
        "scan of {} at m = {} with coefficients in [-{bound}, {bound}]: {} survivors\n",
        v,
        m.compact(),
        found.len()
    );
    let mut rows = Vec::new();
    for c in &found {
        let ord = ordering_name(c.ordering);
        text.push_str(&format!(
            "  {:?} {} <w,w> = {} Z = {} phase {}\n",
            c.coords, c.vector, c.self_pairing, c.charge, ord
        ));
        rows.push(json!({
            "coords": c.coords,
            "vector": c.vector.to_string(),
            "self_pairing": c.self_pairing.to_string(),
            "charge": [c.charge.re().to_string(), c.charge.im().to_string()],
            "ordering": ord,
        }));
    }
    let data = json!({
        "v": v.to_string(),
        "m": m.to_string(),
        "max_coeff": bound,
        "survivors": rows,
    });
    Ok(Output::new(text, data))
}

pub fn picard(sc: &Scenario) -> Result<Output> {
    let ns = sc.ns_lattice()?;
    let pic = sc.twisted_picard()?;
    if !ns.same_as(&pic) {
        bail!("Neron-Severi generators do not span Pic(S,B)");
    }
    let gram = generator_gram(sc)?;
    let disc = gram.det();
    let gens: Vec<String> = sc.ns_generators().iter().map(|g| g.to_string()).collect();
    let mut text = format!("Gram {gram}\n|disc| {}\n", disc.magnitude());
    for g in &gens {
        text.push_str(&format!("  generator {g}\n"));
    }
    let data = json!({
        "gram": gram.to_string(),
        "disc": disc.to_string(),
        "signature": gram.signature().to_string(),
        "generators": gens,
    });
    Ok(Output::new(text, data))
}

/// Gram matrix on the Neron-Severi generators themselves, not on a reduced basis.
pub fn generator_gram(sc: &Scenario) -> Result<Gram> {
    let coords = sc
        .ns_generators()
        .iter()
        .map(|g| g.to_coords().context("non-integral generator"))
        .collect::<Result<Vec<_>>>()?;
    Ok(sc.mukai_gram().congruent(&coords))
}

pub fn chi(preset: Option<&str>, twists: &[i64]) -> Result<Output> {
    let profile = match preset {
        Some(name) => TwistProfile::preset(name)
            .with_context(|| format!("unknown preset {name:?}; expected B0 or B1"))?,
        None if !twists.is_empty() => TwistProfile(twists.to_vec()),
        None => bail!("give --preset or a list of twists"),
    };
    let x = chi_p2(&profile);
    let data = json!({ "twists": profile.0, "rank": profile.rank(), "chi": x });
    Ok(Output::new(format!("chi: {x}\n"), data))
}

pub fn represent(gram: &[i64], target: i64, bound: u64) -> Result<Output> {
    let g = Gram::from_flat(gram).context("--gram")?;
    let r = represents(&g, target, bound)?;
    let data = json!({ "gram": g.to_string(), "target": target, "result": r.to_string() });
    Ok(Output::new(format!("{r}\n"), data))
}

pub fn verify(sc: &Scenario, opts: &battery::BatteryOptions) -> Report {
    battery::run_battery(sc, opts)
}
