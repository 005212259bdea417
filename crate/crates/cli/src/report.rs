//! Text and JSON rendering. JSON goes through `serde_json::Value`, whose maps
//! are ordered, so output is byte-stable.

use std::fmt::Write;

use rug::{Float, Integer, Rational};
use serde::Serialize;
use serde_json::{json, Value};

use congr_core::certify::CertificationRun;
use congr_core::ikeda::LiftContext;
use congr_core::lseries::{AlgValue, LFunctionSpec, LValue, RootNumber};
use congr_core::qexp::QExpansion;

use crate::factored;

pub struct Output {
    text: String,
    json: Value,
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json<T: Serialize>(x: &T) -> String {
    let v = serde_json::to_value(x).expect("report serializes");
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

fn sci(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits))
}

impl Output {
    pub fn emit(&self, json: bool) {
        if json {
            print!("{}", to_json(&self.json));
        } else {
            print!("{}", self.text);
        }
    }

    pub fn coefficients(name: &str, f: &QExpansion, terms: usize) -> Self {
        let mut text = format!("{name}: weight {}, level {}\n", f.weight, f.level);
        let mut coeffs = Vec::new();
        for n in 1..=terms {
            let a = &f.coeffs[n];
            let _ = writeln!(text, "a({n}) = {a}{}", factored_suffix(a));
            coeffs.push(a.to_string());
        }
        let json = json!({ "form": name, "weight": f.weight, "level": f.level, "coefficients": coeffs });
        Output { text, json }
    }

    pub fn lvalue(spec: &LFunctionSpec, v: &LValue, solved: bool) -> Self {
        let eps = match &spec.root_number {
            RootNumber::Known(e) => format!("{:.20}", e),
            RootNumber::Unknown => "unknown".into(),
        };
        let digits = v.precision_digits as usize;
        let value = format!("{:.*}", digits, v.value);
        let err = sci(&v.abs_error_bound, 3);
        let s = format!("{:.20}", v.s);
        let mut text = format!("{}\n", spec.describe());
        let _ = writeln!(text, "root number = {eps}{}", if solved { " (solved)" } else { "" });
        let _ = writeln!(text, "L({s}) = {value}");
        let _ = writeln!(text, "  +/- {err}");
        let json = json!({
            "spec": spec.describe(),
            "root_number": eps,
            "root_number_solved": solved,
            "s": s,
            "value": value,
            "abs_error_bound": err,
            "precision_digits": v.precision_digits,
        });
        Output { text, json }
    }

    pub fn alg(v: &AlgValue, den_digits: u32) -> Self {
        let float = sci(&v.value, 40);
        let bound = format!("1e-{}", v.digits);
        let exact = factored(&v.rational);
        let text = format!("{} = {exact}\n  = {float} +/- {bound} (relative)\n", v.label);
        let json = json!({
            "label": v.label,
            "value": exact,
            "rational": v.rational.to_string(),
            "float": float,
            "relative_error_bound": bound,
            "precision_digits": v.digits,
            "denominator_digit_bound": den_digits,
        });
        Output { text, json }
    }

    pub fn lift(ctx: &LiftContext, gamma: &Integer, c: &Integer) -> Self {
        let text = format!(
            "U({n},{n}) lift, k = {k}, D_K = {d}\nA(gamma = {gamma}) = {c}{}\n",
            factored_suffix(&Rational::from(c)),
            n = ctx.n,
            k = ctx.k,
            d = ctx.disc
        );
        let json = json!({ "n": ctx.n, "k": ctx.k, "disc": ctx.disc, "gamma": gamma.to_string(), "coefficient": c.to_string() });
        Output { text, json }
    }

    pub fn sweep(ell: u64, bound: u64, witness: Option<u64>, a: Option<Integer>) -> Self {
        let text = match (witness, &a) {
            (Some(p), Some(a)) => {
                let r = Integer::from(a.mod_u(ell as u32));
                format!("ell = {ell}: witness p = {p}, a(p) = {a} = {r} mod {ell}\n")
            }
            _ => format!("ell = {ell}: no witness p <= {bound}\n"),
        };
        let json = json!({
            "ell": ell,
            "bound": bound,
            "witness": witness,
            "a_p": a.map(|x| x.to_string()),
        });
        Output { text, json }
    }
}

fn factored_suffix(q: &Rational) -> String {
    let f = factored(q);
    if f == q.to_string() {
        String::new()
    } else {
        format!(" = {f}")
    }
}

pub fn certify_text(run: &CertificationRun) -> String {
    let mut out = String::new();
    let c = &run.config_echo;
    let _ = writeln!(
        out,
        "D_K = {}, n = {}, k = {}, m = {}, t = {}, T = {}, {} digits",
        c.disc, c.n, c.k, c.m, c.t, c.big_t, c.precision_digits
    );
    for fe in &run.functional_equations {
        let _ = writeln!(out, "functional equation {}: {}", fe.l_function, fe.selected);
    }
    for e in run.lalg_sym2.iter().chain(&run.lalg_conv) {
        let _ = writeln!(out, "{} = {}", e.label, e.value);
    }
    for d in &run.dirichlet {
        let _ = writeln!(out, "L({j}, chi^{j}) = {}", d.value, j = d.j);
    }
    let _ = writeln!(out, "V = {}", run.v.value);
    let _ = writeln!(out, "U = {}", run.u.value);
    for r in &run.reports {
        let status =
            serde_json::to_value(&r.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let _ = writeln!(out, "ell = {}: {status}, depth {}", r.ell, r.depth);
        for ch in &r.checks {
            let _ = writeln!(out, "  [{}] {}: {}", if ch.passed { "ok" } else { "FAIL" }, ch.name, ch.detail);
        }
    }
    let _ = writeln!(out, "certified: {:?}", run.certified());
    out
}
