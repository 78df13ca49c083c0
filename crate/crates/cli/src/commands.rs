use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use charp::cartier::{compatibility_witness, CartierMap};
use charp::diagonal::{
    balance_identity_check, dn_regularity_witness, lala_check, lift_basis_image, psi_eval, psi_via_splitting,
    verify_lift, BasisExponent, Caps, DiagonalContext, DnTarget, LiftCase, ResidualPlacement, TensorPower,
};
use charp::segre::SegreContext;
use charp::testideal::{briancon_skoda_check, subadditivity_check, test_ideal_bms, RationalExponent};
use charp::ustp::{cross_check_symbolic_power, symbolic_power, ustp_containment_report, PrimeSpec, QuotientRingSpec};
use charp::{IdealHandle, Polynomial, Ring, Verdict};
use serde_json::json;

use crate::error::CliError;
use crate::report::Report;
use crate::session::SessionSpec;

pub const COMMANDS: &[&str] = &[
    "trace-eval",
    "lala-check",
    "lift-verify",
    "dn-witness",
    "compat-check",
    "testideal",
    "subadd-check",
    "bs-check",
    "symbolic",
    "ustp",
];

/// Flag values; each overrides the session parameter of the same meaning.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub e_max: Option<u32>,
    pub n_max: Option<u32>,
    pub degree_bound: Option<u32>,
    pub cap: Option<u64>,
    pub unknown_cap: Option<u64>,
}

struct Ctx<'a> {
    spec: &'a SessionSpec,
    opts: &'a Options,
}

impl Ctx<'_> {
    fn param<T: FromStr>(&self, name: &str) -> Result<Option<T>, CliError> {
        self.spec
            .param(name)
            .map(|v| v.parse().map_err(|_| CliError::Usage(format!("param {name} = {v:?} is not valid"))))
            .transpose()
    }

    fn num<T: FromStr>(&self, flag: Option<T>, name: &str, default: T) -> Result<T, CliError> {
        Ok(match flag {
            Some(v) => v,
            None => self.param(name)?.unwrap_or(default),
        })
    }

    fn required(&self, name: &str) -> Result<&str, CliError> {
        self.spec
            .param(name)
            .ok_or_else(|| CliError::Usage(format!("this command needs 'param {name} = ...;'")))
    }

    fn caps(&self) -> Caps {
        let d = Caps::default();
        Caps {
            elements: self.opts.cap.unwrap_or(d.elements),
            unknowns: self.opts.unknown_cap.unwrap_or(d.unknowns),
        }
    }

    fn segre(&self) -> Result<(u32, u32), CliError> {
        self.spec
            .segre
            .ok_or_else(|| CliError::Usage("this command needs a 'segre r=.. s=..;' session".into()))
    }

    /// The ideal named by `param ideal`, else the only or first declared one.
    fn ideal(&self, ring: &Arc<Ring>, fallback: &str) -> Result<(String, IdealHandle), CliError> {
        let name = match self.spec.param("ideal") {
            Some(n) => n.to_string(),
            None if self.spec.ideals.iter().any(|(n, _)| n == fallback) => fallback.to_string(),
            None => self
                .spec
                .ideals
                .first()
                .map(|(n, _)| n.clone())
                .ok_or_else(|| CliError::Usage("this command needs an 'ideal NAME { .. };' block".into()))?,
        };
        let ideal = self.spec.ideal(ring, &name)?;
        Ok((name, ideal))
    }

    fn map(&self, ring: &Arc<Ring>) -> Result<(String, CartierMap), CliError> {
        let spec = match self.spec.param("map") {
            Some(n) => self.spec.map(n)?,
            None => self
                .spec
                .maps
                .first()
                .ok_or_else(|| CliError::Usage("this command needs a 'map NAME { .. };' block".into()))?,
        };
        Ok((spec.name.clone(), CartierMap::new(spec.e, self.spec.poly(ring, &spec.g)?)?))
    }

    fn quotient(&self, ring: &Arc<Ring>) -> Result<QuotientRingSpec, CliError> {
        if self.spec.quotient.is_empty() {
            return Err(CliError::Usage("this command needs a 'quotient { .. };' block".into()));
        }
        Ok(QuotientRingSpec::new(IdealHandle::parse(ring, &self.spec.quotient)?)?)
    }

    fn prime(&self, ring: &Arc<Ring>, q: &QuotientRingSpec) -> Result<(String, PrimeSpec), CliError> {
        let (name, p) = self.ideal(ring, "P")?;
        let s = self.spec.poly(ring, self.required("s")?)?;
        let h = self.param("h")?.unwrap_or(0);
        Ok((name, PrimeSpec::new(q, p.generators().to_vec(), h, s)?))
    }
}

fn ideal_strings(i: &IdealHandle) -> Vec<String> {
    i.groebner_basis().iter().map(|g| g.to_string()).collect()
}

/// `a = 1,1; 0,4` style grids: rows are tensor factors.
fn parse_grid(text: &str) -> Result<Vec<Vec<u32>>, CliError> {
    text.split(|c| c == ';' || c == '|' || c == '/')
        .map(|row| {
            row.split(',')
                .map(|v| v.trim().parse().map_err(|_| CliError::Usage(format!("bad grid entry {v:?} in {text:?}"))))
                .collect()
        })
        .collect()
}

/// Runs one command on a parsed session.
pub fn run_command(spec: &SessionSpec, command: &str, opts: &Options) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut report = Report::new(command, spec.to_string());
    let cx = Ctx { spec, opts };
    let ring = spec.ring()?;
    match command {
        "trace-eval" => trace_eval(&cx, &ring, &mut report)?,
        "lala-check" => lala(&cx, &mut report)?,
        "lift-verify" => lift_verify(&cx, &mut report)?,
        "dn-witness" => dn_witness(&cx, &ring, &mut report)?,
        "compat-check" => compat(&cx, &ring, &mut report)?,
        "testideal" => testideal(&cx, &ring, &mut report)?,
        "subadd-check" => {
            let (name, a) = cx.ideal(&ring, "a")?;
            let t: RationalExponent = cx.param("t")?.unwrap_or(RationalExponent::integer(1));
            let n = cx.num(opts.n_max, "n", 2)?;
            let e_max = cx.num(opts.e_max, "e_max", 4)?;
            let v = subadditivity_check(&a, t, n, e_max)?;
            report.record(json!({ "ideal": name, "t": t, "n": n, "e_max": e_max, "verdict": v.to_string() }))?;
            if v == Verdict::Inconclusive {
                report.caveat(format!("a test ideal chain did not stabilize by e = {e_max}"));
            }
            report.merge(v);
        }
        "bs-check" => {
            let (name, a) = cx.ideal(&ring, "q")?;
            let h = cx.num(None, "h", a.generators().len() as u32)?;
            let e_max = cx.num(opts.e_max, "e_max", 4)?;
            let v = briancon_skoda_check(&a, h, e_max)?;
            report.record(json!({ "ideal": name, "h": h, "e_max": e_max, "verdict": v.to_string() }))?;
            if v == Verdict::Inconclusive {
                report.caveat(format!("the test ideal chain did not stabilize by e = {e_max}"));
            }
            report.merge(v);
        }
        "symbolic" => symbolic(&cx, &ring, &mut report)?,
        "ustp" => ustp(&cx, &ring, &mut report)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown command {other:?}; expected one of {}",
                COMMANDS.join(", ")
            )))
        }
    }
    report.millis = start.elapsed().as_millis();
    Ok(report)
}

fn trace_eval(cx: &Ctx, ring: &Arc<Ring>, report: &mut Report) -> Result<(), CliError> {
    let f = cx.spec.poly(ring, cx.required("f")?)?;
    // A declared map wins unless `param e` asks for the bare trace.
    let (label, map) = if cx.spec.param("map").is_some() || (cx.spec.param("e").is_none() && !cx.spec.maps.is_empty()) {
        cx.map(ring)?
    } else {
        let e = cx.num(None, "e", 1)?;
        (format!("Phi^{e}"), CartierMap::trace(ring, e)?)
    };
    let value = map.apply(&f)?;
    report.record(json!({ "map": label, "multiplier": map.g().to_string(), "e": map.e(), "f": f.to_string(), "value": value.to_string() }))?;
    Ok(())
}

fn lala(cx: &Ctx, report: &mut Report) -> Result<(), CliError> {
    let (r, s) = cx.segre()?;
    let e = cx.num(None, "e", 1)?;
    let a = parse_grid(cx.required("a")?)?;
    let b = parse_grid(cx.required("b")?)?;
    let seg = SegreContext::new(cx.spec.p, e, r, s)?;
    let ctx = DiagonalContext::new(&seg, a.len() as u32)?;
    let grid = BasisExponent::new(seg.q(), a, b)?;
    let placement = match cx.spec.param("residual") {
        None | Some("last") => ResidualPlacement::Last,
        Some("first") => ResidualPlacement::First,
        Some(other) => return Err(CliError::Usage(format!("residual must be first or last, not {other:?}"))),
    };
    let psi = psi_eval(&ctx, &grid);
    let psi_check = psi_via_splitting(&ctx, &grid)?;
    let lift = lift_basis_image(&ctx, &grid, placement)?;
    let diagram = ctx.tensor().delta_eval(&lift.value)? == psi;
    let balance = match lift.case {
        LiftCase::MainCase => Some(balance_identity_check(&grid)?),
        _ => None,
    };
    report.record(json!({
        "lala": lala_check(&grid),
        "psi": psi.to_string(),
        "lift": lift,
        "diagram_holds": diagram,
        "psi_matches_splitting": psi == psi_check,
        "balance_identities": balance,
    }))?;
    report.merge(Verdict::from_bool(diagram && psi == psi_check && balance != Some(false)));
    Ok(())
}

fn lift_verify(cx: &Ctx, report: &mut Report) -> Result<(), CliError> {
    let (r, s) = cx.segre()?;
    let e = cx.num(None, "e", 1)?;
    let n = cx.num(cx.opts.n_max, "n", 2)?;
    let d = cx.num(cx.opts.degree_bound, "degree_bound", 3)?;
    let seg = SegreContext::new(cx.spec.p, e, r, s)?;
    let ctx = DiagonalContext::new(&seg, n)?;
    let rep = verify_lift(&ctx, d, cx.caps().elements)?;
    report.record(json!({ "e": e, "n": n, "degree_bound": d, "result": rep }))?;
    if !seg.generator_bound_holds() {
        report.caveat("q <= max(r+1, s+1): generator images are checked on a spanning list, not a minimal one");
    }
    report.merge(Verdict::from_bool(rep.passed()));
    Ok(())
}

fn dn_witness(cx: &Ctx, ring: &Arc<Ring>, report: &mut Report) -> Result<(), CliError> {
    let target = if cx.spec.segre.is_some() {
        DnTarget::Segre
    } else {
        DnTarget::Ambient
    };
    let f = match cx.spec.param("f") {
        Some(f) => cx.spec.poly(ring, f)?,
        None if target == DnTarget::Segre => Polynomial::parse(ring, "x0*y0")?,
        None => return Err(CliError::Usage("dn-witness needs 'param f = ...;'".into())),
    };
    let n = cx.num(cx.opts.n_max, "n", 2)?;
    let e_max = cx.num(cx.opts.e_max, "e_max", 2)?;
    let g_bound = cx.opts.degree_bound.or(cx.param("g_bound")?);
    let tp = TensorPower::new(ring, n)?;
    let found = dn_regularity_witness(&tp, target, &f, e_max, g_bound, &cx.caps())?;
    report.record(json!({ "f": f.to_string(), "n": n, "e_max": e_max, "target": target, "witness": found }))?;
    if found.is_none() {
        report.caveat("no witness within the degree bounds; this is not a proof that none exists");
        report.merge(Verdict::Inconclusive);
    }
    Ok(())
}

fn compat(cx: &Ctx, ring: &Arc<Ring>, report: &mut Report) -> Result<(), CliError> {
    let (map_name, map) = cx.map(ring)?;
    let (ideal_name, ideal) = cx.ideal(ring, "I")?;
    let w = compatibility_witness(&map, &ideal, cx.caps().elements)?;
    report.record(json!({ "map": map_name, "ideal": ideal_name, "compatible": w.is_none(), "witness": w }))?;
    report.merge(Verdict::from_bool(w.is_none()));
    Ok(())
}

fn testideal(cx: &Ctx, ring: &Arc<Ring>, report: &mut Report) -> Result<(), CliError> {
    let (name, a) = cx.ideal(ring, "a")?;
    let t: RationalExponent = cx.param("t")?.unwrap_or(RationalExponent::integer(1));
    let e_max = cx.num(cx.opts.e_max, "e_max", 4)?;
    let res = test_ideal_bms(&a, t, e_max)?;
    report.record(json!({
        "ideal": name,
        "t": t,
        "e_max": e_max,
        "test_ideal": ideal_strings(&res.ideal),
        "stabilized_at_e": res.stabilized_at_e,
        "chain": res.chain.iter().map(ideal_strings).collect::<Vec<_>>(),
    }))?;
    if res.p_divides_denominator {
        report.caveat("p divides the denominator of t; stabilization may be delayed");
    }
    if !res.stabilized() {
        report.caveat(format!("chain did not stabilize by e = {e_max}; the result is a lower bound"));
        report.merge(Verdict::Inconclusive);
    }
    Ok(())
}

const ORACLE_CAP: u64 = 100_000;

fn symbolic(cx: &Ctx, ring: &Arc<Ring>, report: &mut Report) -> Result<(), CliError> {
    let q = cx.quotient(ring)?;
    let (name, p) = cx.prime(ring, &q)?;
    let m = cx.num(None, "m", 2)?;
    let sym = symbolic_power(&p, m, &q)?;
    let degree = cx.num(cx.opts.degree_bound, "oracle_degree", m + 2)?;
    let unconfirmed = cross_check_symbolic_power(&p, m, &q, degree, ORACLE_CAP)?;
    report.record(json!({
        "prime": name,
        "m": m,
        "generators": ideal_strings(&sym),
        "oracle_degree": degree,
        "unconfirmed_generator": unconfirmed,
    }))?;
    for note in p.notes() {
        report.caveat(note.clone());
    }
    if unconfirmed.is_some() {
        report.caveat("the element oracle did not confirm every generator within its bounds");
        report.merge(Verdict::Inconclusive);
    }
    Ok(())
}

fn ustp(cx: &Ctx, ring: &Arc<Ring>, report: &mut Report) -> Result<(), CliError> {
    let q = cx.quotient(ring)?;
    let (name, p) = cx.prime(ring, &q)?;
    let h: u32 = cx.param("h")?.ok_or_else(|| CliError::Usage("ustp needs 'param h = ...;'".into()))?;
    let n_max = cx.num(cx.opts.n_max, "n_max", 3)?;
    let rep = ustp_containment_report(&q, &p, h, n_max)?;
    let verdict = rep.verdict;
    for c in &rep.caveats {
        report.caveat(c.clone());
    }
    let oracle = cx.param::<String>("oracle")?.map_or(true, |v| v != "off");
    let mut unconfirmed = Vec::new();
    if oracle {
        for n in 1..=n_max {
            let m = h * n;
            let degree = cx.num(cx.opts.degree_bound, "oracle_degree", m + 2)?;
            if let Some(g) = cross_check_symbolic_power(&p, m, &q, degree, ORACLE_CAP)? {
                unconfirmed.push(json!({ "m": m, "generator": g }));
            }
        }
    } else {
        report.caveat("element oracle cross-check disabled");
    }
    report.record(json!({ "prime": name, "h": h, "n_max": n_max, "report": rep, "unconfirmed": unconfirmed }))?;
    report.merge(verdict);
    if !unconfirmed.is_empty() {
        report.caveat("the element oracle did not confirm every symbolic-power generator");
        report.merge(Verdict::Inconclusive);
    }
    Ok(())
}
