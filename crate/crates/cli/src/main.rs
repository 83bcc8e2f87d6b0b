use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use hermcov::autgrp::{family_i_group, family_ii_group, family_iii_group, pgu_stabilizer, subgroup_types};
use hermcov::gfield::{make_field, FieldCtx, Felt};
use hermcov::isocls::{class_inventory, family_i_classify, family_i_iso, family_ii_iso, oracle_iso};
use hermcov::models::{
    construct, family_iii_parameters, genus_formula, gsx_genus_table, parameters, verify_lemma_a, verify_lemma_b,
    Family, HermitianVariant, ModelError,
};
use hermcov::numsg::{is_telescopic, semigroup_at_infinity, telescopic_genus, NumSemigroup};
use hermcov::placecount::{family_iii_place_count, genus_from_count, maximality_from_count, places_over};
use hermcov::suite::{field_suite, run_all, run_criterion, CheckResult, CRITERIA};

#[derive(Parser)]
#[command(name = "hermcov", version, about = "Subcovers of the Hermitian curve with Galois group of order p^2")]
struct Cli {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "text"])]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    h: u32,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Position of the parameter among the elements of its home field
    /// (F_q for family I, F_{q^2} for families II and III), in increasing
    /// integer encoding.
    #[arg(long, conflicts_with = "b_raw")]
    b: Option<u128>,
    /// The parameter in the integer encoding of F_{p^{4h}}.
    #[arg(long)]
    b_raw: Option<u128>,
}

#[derive(Subcommand)]
enum Command {
    /// Field descriptor: modulus, subfields and the element ω.
    Field(FieldArgs),
    /// Build a curve model.
    Construct {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        param: ParamArgs,
    },
    /// Rational places and maximality; every admissible parameter when none is given.
    Count {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        param: ParamArgs,
        /// Count over F_{q^{2k}}.
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Largest number of parameters to count.
        #[arg(long, default_value_t = 64)]
        limit: usize,
    },
    /// Genus formulas.
    Genus {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Numerical semigroups from generators or at the place at infinity of a family.
    Semigroup {
        /// Comma-separated generators.
        #[arg(long, value_delimiter = ',', conflicts_with = "family")]
        gens: Option<Vec<u64>>,
        #[arg(long, value_parser = parse_family, requires = "p")]
        family: Option<Family>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        h: Option<u32>,
    },
    /// Automorphism groups of a model.
    Aut {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        param: ParamArgs,
    },
    /// Isomorphism of two family members, or the class inventory.
    Iso {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        param: ParamArgs,
        /// Second parameter, read like `--b`.
        #[arg(long)]
        b_bar: Option<u128>,
        /// Second parameter, read like `--b-raw`.
        #[arg(long)]
        b_bar_raw: Option<u128>,
        /// Also run the exhaustive map-search oracle of this tier.
        #[arg(long)]
        oracle: Option<u8>,
        /// Classify all admissible parameters.
        #[arg(long)]
        inventory: bool,
    },
    /// Factorization of the polynomial behind the family I classification.
    VerifyLemmaA {
        #[arg(long)]
        p: u32,
    },
    /// The identity F = G^2 + G Tr(X) behind the family III model (p = 2).
    VerifyLemmaB {
        #[arg(long)]
        h: u32,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[command(flatten)]
        param: ParamArgs,
    },
    /// Run the verification suite.
    Verify {
        /// Run all ten numbered checks.
        #[arg(long)]
        all: bool,
        /// Run one numbered check; may be repeated.
        #[arg(long)]
        criterion: Vec<u8>,
        #[arg(long, requires = "h")]
        p: Option<u64>,
        #[arg(long, requires = "p")]
        h: Option<u32>,
        /// Drop timings so repeated runs give identical output.
        #[arg(long)]
        no_timing: bool,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    Ok(match s.to_ascii_lowercase().as_str() {
        "hermitian" | "h" => Family::Hermitian,
        "center" | "center_p" => Family::CenterP,
        "noncenter" | "noncenter_p" => Family::NoncenterP,
        "fpp" | "fpp_char2" => Family::FppChar2,
        "i" | "1" | "family_i" => Family::FamilyI,
        "ii" | "2" | "family_ii" => Family::FamilyII,
        "iii" | "3" | "family_iii" => Family::FamilyIII,
        _ => return Err(format!("unknown family {s}")),
    })
}

enum Fail {
    Invalid(String),
    Math(String),
}

fn invalid(e: impl Display) -> Fail {
    Fail::Invalid(e.to_string())
}

fn model_fail(e: ModelError) -> Fail {
    match e {
        ModelError::InexactDivision { .. } | ModelError::TerminalMismatch { .. } => Fail::Math(e.to_string()),
        _ => invalid(e),
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// One entry of the `results` list; exit status 1 when any check failed.
struct Report {
    ctx: Option<Arc<FieldCtx>>,
    command: &'static str,
    body: Map<String, Value>,
    checks: Vec<(String, bool)>,
    discrepancies: Vec<String>,
}

impl Report {
    fn new(command: &'static str, ctx: Option<&Arc<FieldCtx>>) -> Self {
        Report { ctx: ctx.cloned(), command, body: Map::new(), checks: Vec::new(), discrepancies: Vec::new() }
    }

    fn put(&mut self, key: &str, v: impl Serialize) {
        self.body.insert(key.to_string(), to_value(v));
    }

    fn check(&mut self, claim: impl Into<String>, ok: bool) {
        self.checks.push((claim.into(), ok));
    }

    fn failed(&self) -> bool {
        self.checks.iter().any(|c| !c.1)
    }

    fn into_value(self) -> Value {
        let mut out = Map::new();
        out.insert("command".into(), json!(self.command));
        out.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        if let Some(ctx) = &self.ctx {
            out.insert("field".into(), to_value(ctx.descriptor()));
        }
        out.extend(self.body);
        let checks: Vec<Value> = self.checks.iter().map(|(c, ok)| json!({"check": c, "passed": ok})).collect();
        out.insert("checks".into(), Value::Array(checks));
        out.insert("discrepancies".into(), to_value(&self.discrepancies));
        Value::Object(out)
    }
}

fn field_ctx(f: &FieldArgs) -> Result<Arc<FieldCtx>, Fail> {
    Ok(Arc::new(make_field(f.p, f.h).map_err(invalid)?))
}

fn home_degree(ctx: &FieldCtx, family: Family) -> u32 {
    match family {
        Family::FamilyI => ctx.h(),
        _ => 2 * ctx.h(),
    }
}

fn resolve(ctx: &FieldCtx, family: Family, rank: Option<u128>, raw: Option<u128>) -> Result<Option<Felt>, Fail> {
    if let Some(n) = raw {
        return ctx.decode(n).map(Some).map_err(invalid);
    }
    let Some(n) = rank else { return Ok(None) };
    let home = ctx.subfield_elements(home_degree(ctx, family)).map_err(invalid)?;
    home.get(n as usize)
        .copied()
        .map(Some)
        .ok_or_else(|| Fail::Invalid(format!("--b {n} exceeds the size {} of the parameter field", home.len())))
}

fn param(ctx: &FieldCtx, family: Family, p: &ParamArgs) -> Result<Option<Felt>, Fail> {
    resolve(ctx, family, p.b, p.b_raw)
}

fn parameterized(family: Family) -> bool {
    matches!(family, Family::FamilyI | Family::FamilyII | Family::FamilyIII)
}

fn cmd_field(f: &FieldArgs) -> Result<Vec<Report>, Fail> {
    let ctx = field_ctx(f)?;
    let mut r = Report::new("field", Some(&ctx));
    r.put("q", ctx.q());
    r.put("degree", ctx.degree());
    r.put("omega", ctx.encode(ctx.find_omega()));
    let subfields: Vec<Value> = (1..=ctx.degree())
        .filter(|m| ctx.degree() % m == 0)
        .map(|m| json!({"degree": m, "basis": ctx.subfield_basis(m).map(|b| b.iter().map(|&x| ctx.encode(x)).collect::<Vec<_>>()).unwrap_or_default()}))
        .collect();
    r.put("subfields", subfields);
    Ok(vec![r])
}

fn cmd_construct(family: Family, f: &FieldArgs, pa: &ParamArgs) -> Result<Vec<Report>, Fail> {
    let ctx = field_ctx(f)?;
    let b = param(&ctx, family, pa)?;
    let model = construct(&ctx, family, b).map_err(model_fail)?;
    let mut r = Report::new("construct", Some(&ctx));
    r.put("model", model.report());
    r.put("genus", model.claimed_genus);
    let formula = genus_formula(family, ctx.p(), ctx.h()).map_err(invalid)?;
    r.check("claimed genus equals the genus formula", formula == model.claimed_genus);
    if model.is_rational() {
        r.discrepancies.push("genus 0: the model is rational".into());
    }
    Ok(vec![r])
}

fn cmd_count(family: Family, f: &FieldArgs, pa: &ParamArgs, k: u32, limit: usize) -> Result<Vec<Report>, Fail> {
    let ctx = field_ctx(f)?;
    let bs: Vec<Option<Felt>> = match param(&ctx, family, pa)? {
        Some(b) => vec![Some(b)],
        None if parameterized(family) => parameters(&ctx, family).into_iter().take(limit).map(Some).collect(),
        None => vec![None],
    };
    let q = ctx.q();
    let mut out = Vec::new();
    for b in bs {
        let mut r = Report::new("count", Some(&ctx));
        r.put("family", family);
        r.put("b", b.map(|b| ctx.encode(b)));
        if family == Family::FamilyIII {
            if k != 1 {
                return Err(Fail::Invalid("family III is counted over F_{q^2} only".into()));
            }
            let c = family_iii_place_count(&ctx, b.expect("parameterized")).map_err(invalid)?;
            r.check("N = q^2(q+2)/4 + 1", c.matches_expected);
            r.check("maximal with g = q(q-2)/8", c.maximality.maximal);
            r.put("count", &c.quotient);
            r.put("maximality", &c.maximality);
        } else {
            let model = construct(&ctx, family, b).map_err(model_fail)?;
            let tally = places_over(&model, k).map_err(invalid)?;
            if k == 1 {
                let m = maximality_from_count(q, tally.n, model.claimed_genus);
                r.check("N = q^2 + 2gq + 1 with the claimed genus", m.maximal);
                r.put("maximality", m);
                r.put("genus_from_count", genus_from_count(q, tally.n));
            }
            r.put("count", tally);
        }
        out.push(r);
    }
    Ok(out)
}

fn cmd_genus(family: Family, f: &FieldArgs) -> Result<Vec<Report>, Fail> {
    let ctx = field_ctx(f)?;
    let g = genus_formula(family, ctx.p(), ctx.h()).map_err(invalid)?;
    let mut r = Report::new("genus", Some(&ctx));
    r.put("family", family);
    r.put("genus", g);
    let table = gsx_genus_table(ctx.p(), ctx.h());
    r.put("by_center_intersection", table.iter().map(|&(k, g)| json!({"intersection_order": k, "genus": g})).collect::<Vec<_>>());
    if matches!(family, Family::FamilyI | Family::FamilyII) {
        let s = semigroup_at_infinity(family, ctx.p(), ctx.h()).map_err(invalid)?;
        r.check("semigroup gap count equals the genus formula", s.genus == g);
        r.put("semigroup_generators", &s.generators);
    }
    Ok(vec![r])
}

fn cmd_semigroup(gens: Option<Vec<u64>>, family: Option<Family>, p: Option<u64>, h: Option<u32>) -> Result<Vec<Report>, Fail> {
    let mut r = Report::new("semigroup", None);
    let gens = match (gens, family) {
        (Some(g), _) => g,
        (None, Some(fam)) => {
            let (p, h) = (p.ok_or(invalid("--p is required"))? as u32, h.ok_or(invalid("--h is required"))?);
            let s = semigroup_at_infinity(fam, p, h).map_err(invalid)?;
            let g = genus_formula(fam, p, h).map_err(invalid)?;
            r.check("semigroup gap count equals the genus formula", s.genus == g);
            r.put("family", fam);
            s.generators
        }
        _ => return Err(invalid("give --gens or --family")),
    };
    let s = NumSemigroup::from_generators(&gens).map_err(invalid)?;
    let trace = is_telescopic(&gens).map_err(invalid)?;
    if trace.telescopic {
        let tg = telescopic_genus(&gens).map_err(invalid)?;
        r.check("telescopic genus equals the gap count", tg.genus == s.genus);
        if tg.l_g_with_a1 != tg.l_g {
            r.discrepancies.push(format!("the sum with a_1 in every term gives l_g = {}, not {}", tg.l_g_with_a1, tg.l_g));
        }
        r.put("telescopic_genus", tg);
    }
    r.put("semigroup", s);
    r.put("telescopic", trace);
    Ok(vec![r])
}

fn require_b(ctx: &FieldCtx, family: Family, pa: &ParamArgs) -> Result<Felt, Fail> {
    match param(ctx, family, pa)? {
        Some(b) => Ok(b),
        None => parameters(ctx, family).first().copied().ok_or_else(|| invalid(format!("{family} has no admissible parameter here"))),
    }
}

fn cmd_aut(family: Family, f: &FieldArgs, pa: &ParamArgs) -> Result<Vec<Report>, Fail> {
    let ctx = field_ctx(f)?;
    let mut r = Report::new("aut", Some(&ctx));
    r.put("family", family);
    match family {
        Family::Hermitian => {
            let s = pgu_stabilizer(&ctx, HermitianVariant::Plus).map_err(invalid)?;
            let rep = s.report;
            r.check("stabilizer order q^3(q+1)", rep.order as u64 == rep.expected_order);
            r.check("center of the Sylow p-subgroup has order q", rep.center_order as u64 == rep.q);
            r.check("every map preserves the model", rep.all_preserve);
            r.discrepancies.push(format!("stated order q^3(q-1) = {}, computed {}", rep.stated_order, rep.order));
            r.put("report", &rep);
            r.put("subgroup_types", subgroup_types(&ctx).map_err(invalid)?);
        }
        Family::FamilyI => {
            let b = require_b(&ctx, family, pa)?;
            let rep = family_i_group(&ctx, b).map_err(invalid)?.report;
            r.check("|V| = q^3/p^2", rep.v_order as u64 == rep.v_expected);
            r.check("|Λ| = (q+1)(p-1)", rep.lambda_order as u64 == rep.lambda_expected);
            if let Some(w) = rep.w_order {
                r.check("|W| = |V||Λ|", w as u64 == rep.w_expected);
                r.check("V is normal in W", rep.v_normal_in_w);
            }
            r.check("V ∩ Λ = 1", rep.lambda_meets_v_trivially);
            r.check("every map preserves the model", rep.all_preserve);
            r.discrepancies.extend(rep.discrepancies.iter().cloned());
            r.put("report", &rep);
        }
        Family::FamilyII => {
            let b = require_b(&ctx, family, pa)?;
            let rep = family_ii_group(&ctx, b).map_err(invalid)?.report;
            r.check("|Ψ| = q^2/p", rep.psi_order as u64 == rep.psi_expected);
            r.check("total order (p-1)q^2/p", rep.total_order as u64 == rep.total_expected);
            r.check("commutator subgroup is Γ", rep.commutator_is_gamma);
            r.check("every map preserves the model", rep.all_preserve);
            r.discrepancies.extend(rep.discrepancies.iter().cloned());
            r.put("report", &rep);
        }
        Family::FamilyIII => {
            let b = require_b(&ctx, family, pa)?;
            let rep = family_iii_group(&ctx, b).map_err(invalid)?.report;
            r.check("normalizer of the deck map has order q^2", rep.normalizer_order as u64 == rep.normalizer_expected);
            r.check("quotient order q^2/2", rep.quotient_order as u64 == rep.quotient_expected);
            r.check("quotient exponent 4", rep.quotient_exponent == 4);
            r.check("every map preserves the model", rep.all_preserve);
            r.put("report", &rep);
        }
        other => return Err(invalid(format!("no automorphism report for {other}"))),
    }
    Ok(vec![r])
}

#[allow(clippy::too_many_arguments)]
fn cmd_iso(
    family: Family,
    f: &FieldArgs,
    pa: &ParamArgs,
    b_bar: Option<u128>,
    b_bar_raw: Option<u128>,
    oracle: Option<u8>,
    inventory: bool,
) -> Result<Vec<Report>, Fail> {
    let ctx = field_ctx(f)?;
    if !matches!(family, Family::FamilyI | Family::FamilyII) {
        return Err(invalid("isomorphism is decided for families I and II"));
    }
    let mut r = Report::new("iso", Some(&ctx));
    r.put("family", family);
    if inventory {
        let inv = class_inventory(family, &ctx).map_err(invalid)?;
        r.check("isomorphism is an equivalence relation", inv.equivalence_relation);
        if let Some(ok) = inv.classifier_agreement {
            r.check("solver agrees with the case split", ok);
        }
        if let Some(ok) = inv.oracle_agreement {
            r.check("solver agrees with the scaling oracle", ok);
        }
        r.put("inventory", inv);
        return Ok(vec![r]);
    }
    let b = param(&ctx, family, pa)?.ok_or(invalid("give --b or --b-raw"))?;
    let bb = resolve(&ctx, family, b_bar, b_bar_raw)?.ok_or(invalid("give --b-bar or --b-bar-raw"))?;
    r.put("b", ctx.encode(b));
    r.put("b_bar", ctx.encode(bb));
    let iso = if family == Family::FamilyI {
        let w = family_i_iso(&ctx, b, bb).map_err(model_or_invalid)?;
        let c = family_i_classify(&ctx, b, bb).map_err(model_or_invalid)?;
        r.check("solver agrees with the case split", w.is_some() == c.iso);
        r.put("witness", w.map(|w| w.report(&ctx)));
        r.put("classification", c);
        w.is_some()
    } else {
        let w = family_ii_iso(&ctx, b, bb).map_err(model_or_invalid)?;
        if let Some(w) = &w {
            r.check("witness verified by substitution", w.verified);
        }
        let iso = w.is_some();
        r.put("witness", w);
        iso
    };
    r.put("iso", iso);
    if let Some(tier) = oracle {
        let ma = construct(&ctx, family, Some(b)).map_err(model_fail)?;
        let mb = construct(&ctx, family, Some(bb)).map_err(model_fail)?;
        let o = oracle_iso(&ma, &mb, tier).map_err(invalid)?;
        r.check("oracle agrees with the solver", o.iso == iso);
        r.put("oracle", o);
    }
    Ok(vec![r])
}

fn model_or_invalid(e: hermcov::isocls::IsoError) -> Fail {
    match e {
        hermcov::isocls::IsoError::Model(m) => model_fail(m),
        other => invalid(other),
    }
}

fn cmd_lemma_a(p: u32) -> Result<Vec<Report>, Fail> {
    let rep = verify_lemma_a(p).map_err(model_fail)?;
    let mut r = Report::new("verify-lemma-a", None);
    r.check("F equals a scalar times the product of the listed factors", rep.holds);
    r.put("report", rep);
    Ok(vec![r])
}

fn cmd_lemma_b(p: u64, h: u32, pa: &ParamArgs) -> Result<Vec<Report>, Fail> {
    if p != 2 {
        return Err(invalid("the identity is stated for p = 2"));
    }
    let ctx = field_ctx(&FieldArgs { p, h })?;
    let bs = match param(&ctx, Family::FamilyIII, pa)? {
        Some(b) => vec![b],
        None => family_iii_parameters(&ctx),
    };
    if bs.is_empty() {
        return Err(invalid("no b with b^q + b + 1 = 0"));
    }
    let mut out = Vec::new();
    for b in bs {
        let rep = verify_lemma_b(&ctx, b).map_err(model_fail)?;
        let mut r = Report::new("verify-lemma-b", Some(&ctx));
        r.check("every recursion division is exact", rep.divisions_exact);
        r.check("g_(h-1) = (X+c)^q", rep.terminal_matches);
        r.check("F = G^2 + G Tr(X)", rep.identity_holds);
        for v in rep.printed_variants.iter().filter(|v| !v.holds) {
            r.discrepancies.push(format!("{} fails", v.label));
        }
        r.put("report", rep);
        out.push(r);
    }
    Ok(out)
}

fn check_report(c: CheckResult, no_timing: bool) -> Report {
    let mut r = Report::new("verify", None);
    let label = if c.id == 0 { c.name.clone() } else { format!("{}: {}", c.id, c.name) };
    r.check(label, c.math_ok);
    r.discrepancies = c.discrepancies.clone();
    r.put("id", c.id);
    r.put("name", &c.name);
    r.put("failures", &c.failures);
    if !no_timing {
        r.put("elapsed_ms", c.elapsed_ms);
        r.put("budget_ms", c.budget_ms);
        r.put("within_budget", c.within_budget);
    }
    r.put("details", &c.details);
    r
}

fn cmd_verify(all: bool, criteria: &[u8], p: Option<u64>, h: Option<u32>, no_timing: bool) -> Result<Vec<Report>, Fail> {
    let mut out = Vec::new();
    if all {
        out.extend(run_all().into_iter().map(|c| check_report(c, no_timing)));
    }
    for &id in criteria {
        let c = run_criterion(id)
            .ok_or_else(|| invalid(format!("unknown check {id}; valid ids are 1 to {}", CRITERIA.len())))?;
        out.push(check_report(c, no_timing));
    }
    if let (Some(p), Some(h)) = (p, h) {
        let s = field_suite(p, h).map_err(invalid)?;
        let ctx = field_ctx(&FieldArgs { p, h })?;
        for c in s.checks {
            let mut r = check_report(c, no_timing);
            r.ctx = Some(ctx.clone());
            out.push(r);
        }
    }
    if out.is_empty() && !all {
        return Err(invalid("give --all, --criterion or --p and --h"));
    }
    Ok(out)
}

fn dispatch(cmd: Command) -> Result<Vec<Report>, Fail> {
    match cmd {
        Command::Field(f) => cmd_field(&f),
        Command::Construct { family, field, param } => cmd_construct(family, &field, &param),
        Command::Count { family, field, param, k, limit } => cmd_count(family, &field, &param, k, limit),
        Command::Genus { family, field } => cmd_genus(family, &field),
        Command::Semigroup { gens, family, p, h } => cmd_semigroup(gens, family, p, h),
        Command::Aut { family, field, param } => cmd_aut(family, &field, &param),
        Command::Iso { family, field, param, b_bar, b_bar_raw, oracle, inventory } => {
            cmd_iso(family, &field, &param, b_bar, b_bar_raw, oracle, inventory)
        }
        Command::VerifyLemmaA { p } => cmd_lemma_a(p),
        Command::VerifyLemmaB { h, p, param } => cmd_lemma_b(p, h, &param),
        Command::Verify { all, criterion, p, h, no_timing } => cmd_verify(all, &criterion, p, h, no_timing),
    }
}

/// `{"results": [...]}` with keys in a fixed order.
pub fn report_json(results: Vec<Value>) -> String {
    let mut s = serde_json::to_string_pretty(&json!({ "results": results })).expect("values serialize");
    s.push('\n');
    s
}

fn text(results: &[Value]) -> String {
    let mut s = String::new();
    for r in results {
        let cmd = r["command"].as_str().unwrap_or("");
        if let Some(obj) = r.as_object() {
            let scalars: Vec<String> = obj
                .iter()
                .filter(|(k, v)| !matches!(k.as_str(), "command" | "version") && (v.is_number() || v.is_string() || v.is_boolean()))
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            if !scalars.is_empty() {
                s.push_str(&format!("{cmd}: {}\n", scalars.join(" ")));
            }
        }
        for c in r["checks"].as_array().into_iter().flatten() {
            let mark = if c["passed"].as_bool() == Some(true) { "ok  " } else { "FAIL" };
            s.push_str(&format!("{cmd}: {mark} {}\n", c["check"].as_str().unwrap_or("")));
        }
        for d in r["discrepancies"].as_array().into_iter().flatten() {
            s.push_str(&format!("{cmd}: note {}\n", d.as_str().unwrap_or("")));
        }
    }
    s
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (reports, code) = match dispatch(cli.command) {
        Ok(reports) => {
            let failed = reports.iter().any(Report::failed);
            (reports, if failed { 1 } else { 0 })
        }
        Err(Fail::Invalid(msg)) => {
            eprintln!("invalid input: {msg}");
            return ExitCode::from(2);
        }
        Err(Fail::Math(msg)) => {
            eprintln!("check failed: {msg}");
            let mut r = Report::new("error", None);
            r.check(msg, false);
            (vec![r], 1)
        }
    };
    let values: Vec<Value> = reports.into_iter().map(Report::into_value).collect();
    let body = if cli.format == "text" { text(&values) } else { report_json(values) };
    if let Err(e) = emit(&cli.out, &body) {
        eprintln!("{e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
