//! JSON forms of problems, closed forms and results. Rationals are written
//! as strings `"p/q"` (or `"p"` for integers); integers are also accepted
//! on input.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::closer::monomial::{ClosedForm, FactorRef, TargetMonomial, Term};
use crate::closer::{degree_bound, BasisKind, Certificate, SolutionSpace, SolveOptions, SumProblem, TermFactor, Verdict};
use crate::error::{Error, Result};
use crate::exact::Poly;
use crate::indefinite::IndependenceReport;
use crate::render::{parse, render};
use crate::sequence::{builtin, CFiniteSequence, SeqRef};
use crate::spectra::{Analysis, UniquenessReport};
use crate::ExactScalar;

/// An exact rational in its JSON string form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational(pub ExactScalar);

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        parse_rational(&v).map(Rational).map_err(serde::de::Error::custom)
    }
}

pub fn parse_rational(v: &Value) -> Result<ExactScalar> {
    let bad = || Error::Invalid(format!("not a rational: {v}"));
    match v {
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(bad)?;
            Ok(ExactScalar::from_integer(i.into()))
        }
        Value::String(s) => s.trim().parse::<ExactScalar>().map_err(|_| bad()),
        _ => Err(bad()),
    }
}

fn rationals(v: &[Rational]) -> Vec<ExactScalar> {
    v.iter().map(|r| r.0.clone()).collect()
}

fn to_rationals(v: &[ExactScalar]) -> Vec<Rational> {
    v.iter().cloned().map(Rational).collect()
}

fn invalid(e: serde_json::Error) -> Error {
    Error::Invalid(format!("malformed JSON: {e}"))
}

/// A declared sequence: either a builtin with parameters or an explicit
/// recurrence `F(n) = Σ c_i F(n-i)` with its initial values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recurrence: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initials: Option<Vec<Rational>>,
}

impl SequenceSpec {
    pub fn build(&self) -> Result<SeqRef> {
        let seq = match (&self.builtin, &self.recurrence, &self.initials) {
            (Some(kind), None, None) => builtin(kind, &rationals(&self.params))?,
            (None, Some(rec), Some(init)) => {
                if !self.params.is_empty() {
                    return Err(Error::Invalid(format!("sequence `{}`: params apply to builtins only", self.name)));
                }
                CFiniteSequence::new(self.name.clone(), rationals(rec), rationals(init))?.minimize()?
            }
            _ => {
                return Err(Error::Invalid(format!(
                    "sequence `{}` needs either `builtin` or both `recurrence` and `initials`",
                    self.name
                )))
            }
        };
        Ok(Arc::new(seq.renamed(self.name.clone())))
    }
}

/// Sequences available by name: the declared ones, then the builtins that
/// take no parameters (`fibonacci`, `n`, `p5`).
#[derive(Clone, Debug, Default)]
pub struct Registry {
    declared: BTreeMap<String, SeqRef>,
}

impl Registry {
    pub fn new(specs: &[SequenceSpec]) -> Result<Self> {
        let mut reg = Registry::default();
        for s in specs {
            reg.insert(s.build()?)?;
        }
        Ok(reg)
    }

    pub fn insert(&mut self, seq: SeqRef) -> Result<()> {
        let name = seq.name().to_string();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::Invalid(format!("`{name}` is not a valid sequence name")));
        }
        if let Some(old) = self.declared.get(&name) {
            if **old != *seq {
                return Err(Error::Invalid(format!("sequence `{name}` is declared twice")));
            }
        }
        self.declared.insert(name, seq);
        Ok(())
    }

    /// Adds every sequence of `other`, rejecting conflicting definitions.
    pub fn merge(&mut self, other: &Registry) -> Result<()> {
        for seq in other.declared.values() {
            self.insert(seq.clone())?;
        }
        Ok(())
    }

    pub fn resolve(&self, name: &str) -> Option<SeqRef> {
        if let Some(s) = self.declared.get(name) {
            return Some(s.clone());
        }
        match name {
            "fibonacci" | "n" | "p5" => builtin(name, &[]).ok().map(Arc::new),
            _ => None,
        }
    }

    fn require(&self, name: &str) -> Result<SeqRef> {
        self.resolve(name)
            .ok_or_else(|| Error::Invalid(format!("sequence `{name}` is neither declared nor builtin")))
    }
}

/// One summand factor `seq(a n + b j + c)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub seq: String,
    pub a: i64,
    pub b: i64,
    #[serde(default)]
    pub c: i64,
}

pub fn sum_problem(factors: &[FactorSpec], reg: &Registry) -> Result<SumProblem> {
    let factors = factors
        .iter()
        .map(|f| Ok(TermFactor::new(reg.require(&f.seq)?, f.a, f.b, f.c)))
        .collect::<Result<Vec<_>>>()?;
    SumProblem::new(factors)
}

fn default_basis() -> String {
    "shifted".into()
}

/// A problem file for the command-line tool.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default)]
    pub sequences: Vec<SequenceSpec>,
    pub sum: Vec<FactorSpec>,
    #[serde(default = "default_basis")]
    pub basis: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra_checks: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<i64>,
    #[serde(default)]
    pub conservative_psi: bool,
    /// Ask for the uniqueness verdict in `solve` output.
    #[serde(default)]
    pub uniqueness: bool,
    /// Initial-value vectors for `indefinite`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant_seq: Option<String>,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(invalid)
    }

    pub fn registry(&self) -> Result<Registry> {
        Registry::new(&self.sequences)
    }

    pub fn problem(&self, reg: &Registry) -> Result<SumProblem> {
        sum_problem(&self.sum, reg)
    }

    pub fn basis_kind(&self) -> Result<BasisKind> {
        match self.basis.as_str() {
            "shifted" => Ok(BasisKind::Shifted),
            "fundamental" => Ok(BasisKind::Fundamental),
            other => Err(Error::Invalid(format!("unknown basis `{other}`"))),
        }
    }

    pub fn options(&self) -> SolveOptions {
        let d = SolveOptions::default();
        SolveOptions {
            anchor: self.anchor.unwrap_or(d.anchor),
            extra_checks: self.extra_checks.unwrap_or(d.extra_checks),
            conservative_psi: self.conservative_psi,
        }
    }

    pub fn variants(&self) -> Vec<Vec<ExactScalar>> {
        self.variants.iter().map(|v| rationals(v)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorJson {
    pub seq: String,
    pub alpha: i64,
    pub shift: i64,
}

/// `poly(n) · ∏ factors`; `poly` lists coefficients from the constant up.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub poly: Vec<Rational>,
    #[serde(default)]
    pub factors: Vec<FactorJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosedFormJson {
    pub terms: Vec<TermJson>,
}

impl ClosedFormJson {
    pub fn from_closed_form(cf: &ClosedForm) -> Self {
        let terms = cf
            .terms
            .iter()
            .map(|t| TermJson {
                poly: to_rationals(t.poly.scale(&t.constant).coeffs()),
                factors: t
                    .factors
                    .iter()
                    .map(|f| FactorJson {
                        seq: f.seq.name().to_string(),
                        alpha: f.alpha,
                        shift: f.shift,
                    })
                    .collect(),
            })
            .collect();
        ClosedFormJson { terms }
    }

    pub fn to_closed_form(&self, reg: &Registry) -> Result<ClosedForm> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let factors = t
                    .factors
                    .iter()
                    .map(|f| Ok(FactorRef::new(reg.require(&f.seq)?, f.alpha, f.shift)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Term::new(Poly::from_coeffs(rationals(&t.poly)), factors))
            })
            .collect::<Result<Vec<_>>>()?;
        ClosedForm::new(terms)
    }
}

/// A closed form given as JSON terms, as an envelope carrying
/// `closed_form`, as `{"text": ...}`, or as a bare text string.
pub fn closed_form_from_value(v: &Value, reg: &Registry) -> Result<ClosedForm> {
    match v {
        Value::String(s) => parse(s, &|name| reg.resolve(name)),
        Value::Object(map) => {
            if let Some(inner) = map.get("closed_form") {
                return closed_form_from_value(inner, reg);
            }
            if let Some(Value::String(s)) = map.get("text") {
                return parse(s, &|name| reg.resolve(name));
            }
            let cf: ClosedFormJson = serde_json::from_value(v.clone()).map_err(invalid)?;
            cf.to_closed_form(reg)
        }
        _ => Err(Error::Invalid("a closed form must be an object or a string".into())),
    }
}

/// One side of an identity for `certify`: a closed form with the
/// sequences it uses and, optionally, a sum added to it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormFile {
    #[serde(default)]
    pub sequences: Vec<SequenceSpec>,
    pub closed_form: Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sum: Vec<FactorSpec>,
}

impl FormFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(invalid)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisJson {
    pub kind: String,
    pub psi_degree: u32,
    pub monomials: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniquenessJson {
    pub verdict: String,
    pub dimension: usize,
    #[serde(rename = "M")]
    pub m: usize,
}

impl From<&UniquenessReport> for UniquenessJson {
    fn from(u: &UniquenessReport) -> Self {
        UniquenessJson {
            verdict: verdict_word(u.is_unique()).into(),
            dimension: u.dimension,
            m: u.m,
        }
    }
}

fn verdict_word(unique: bool) -> &'static str {
    if unique {
        "UNIQUE"
    } else {
        "NOT-UNIQUE"
    }
}

/// Output of `solve`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultEnvelope {
    pub closed_form: ClosedFormJson,
    pub identities: Vec<ClosedFormJson>,
    #[serde(rename = "M")]
    pub m: usize,
    pub degree_bound: usize,
    pub basis: BasisJson,
    pub verified_window: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniqueness: Option<UniquenessJson>,
    pub rendering: String,
}

fn render_monomial(m: &TargetMonomial) -> String {
    let cf = ClosedForm::new(vec![Term::new(Poly::monomial(ExactScalar::from_integer(1.into()), m.h as usize), m.factors.clone())])
        .expect("basis monomials have no constant factors");
    render(&cf)
}

impl ResultEnvelope {
    /// Packs a solution. Factors of polynomial sequences are written as
    /// powers of `n`.
    pub fn new(p: &SumProblem, sol: &SolutionSpace, uniqueness: Option<&UniquenessReport>) -> Result<Self> {
        let particular = sol.particular.expand_polynomial_factors();
        Ok(ResultEnvelope {
            closed_form: ClosedFormJson::from_closed_form(&particular),
            identities: sol
                .identities
                .iter()
                .map(|id| ClosedFormJson::from_closed_form(&id.expand_polynomial_factors()))
                .collect(),
            m: sol.basis.m(),
            degree_bound: degree_bound(p)?,
            basis: BasisJson {
                kind: sol.basis.kind.as_str().into(),
                psi_degree: sol.basis.psi_degree,
                monomials: sol.basis.monomials.iter().map(render_monomial).collect(),
            },
            verified_window: sol.verified_window,
            uniqueness: uniqueness.map(UniquenessJson::from),
            rendering: render(&particular),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(invalid)
    }
}

/// Output of `verify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub verdict: String,
    pub window: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub got: Option<Rational>,
}

/// Compares `cf` with the direct sum on `0..window`.
pub fn verify(p: &SumProblem, cf: &ClosedForm, window: usize) -> Result<VerifyReport> {
    for n in 0..window as i64 {
        let expected = p.brute_force_sum(n)?;
        let got = cf.evaluate(n)?;
        if expected != got {
            return Ok(VerifyReport {
                verdict: "FAIL".into(),
                window,
                n: Some(n),
                expected: Some(Rational(expected)),
                got: Some(Rational(got)),
            });
        }
    }
    Ok(VerifyReport {
        verdict: "PASS".into(),
        window,
        n: None,
        expected: None,
        got: None,
    })
}

/// Output of `certify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub verdict: String,
    pub bound: usize,
    pub window: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Rational>,
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        match &c.verdict {
            Verdict::Proved => CertificateJson {
                verdict: "PROVED".into(),
                bound: c.bound,
                window: c.window,
                n: None,
                lhs: None,
                rhs: None,
            },
            Verdict::Refuted { n, lhs, rhs } => CertificateJson {
                verdict: "REFUTED".into(),
                bound: c.bound,
                window: c.window,
                n: Some(*n),
                lhs: Some(Rational(lhs.clone())),
                rhs: Some(Rational(rhs.clone())),
            },
        }
    }
}

/// Output of `analyze`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisJson {
    pub sequence: String,
    pub p: usize,
    pub q: usize,
    pub cardinalities: BTreeMap<String, usize>,
    pub dims: [usize; 3],
    pub formal_dimension: usize,
    pub contains_one: BTreeMap<String, bool>,
    pub uniqueness: String,
    pub hyperdiscriminant: Rational,
}

impl From<&Analysis> for AnalysisJson {
    fn from(a: &Analysis) -> Self {
        let mut cardinalities = BTreeMap::new();
        cardinalities.insert("S_p".to_string(), a.s_p);
        cardinalities.insert("S_q".to_string(), a.s_q);
        cardinalities.insert("S_p_cap_S_q".to_string(), a.intersection);
        let mut contains_one = BTreeMap::new();
        contains_one.insert("S_p".to_string(), a.one_in_s_p);
        contains_one.insert("S_q".to_string(), a.one_in_s_q);
        AnalysisJson {
            sequence: a.sequence.clone(),
            p: a.p,
            q: a.q,
            cardinalities,
            dims: [a.dims.w_p, a.dims.w_q_plus, a.dims.w_pq_plus_plus],
            formal_dimension: a.formal_dimension,
            contains_one,
            uniqueness: verdict_word(a.unique).into(),
            hyperdiscriminant: Rational(a.hyperdiscriminant.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariantJson {
    pub initials: Vec<Rational>,
    /// Coefficients of `Ψ(n)` from the constant up.
    pub psi: Vec<Rational>,
    pub psi_rendering: String,
    pub sequence_part: ClosedFormJson,
    pub identities: usize,
}

/// Output of `indefinite`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceJson {
    pub sequence: String,
    pub verdict: String,
    pub independent: bool,
    pub psi_bound: usize,
    pub theta_one: bool,
    pub psi_within_bound: bool,
    pub shared_sequence_part: ClosedFormJson,
    pub rendering: String,
    pub variants: Vec<VariantJson>,
}

impl From<&IndependenceReport> for IndependenceJson {
    fn from(r: &IndependenceReport) -> Self {
        let shared = &r.variants[0].sequence_part;
        IndependenceJson {
            sequence: r.sequence.clone(),
            verdict: if r.passed() { "INDEPENDENT" } else { "DEPENDENT" }.into(),
            independent: r.independent,
            psi_bound: r.psi_bound,
            theta_one: r.theta_one,
            psi_within_bound: r.psi_within_bound,
            shared_sequence_part: ClosedFormJson::from_closed_form(shared),
            rendering: render(shared),
            variants: r
                .variants
                .iter()
                .map(|v| VariantJson {
                    initials: to_rationals(&v.initials),
                    psi: to_rationals(v.psi.coeffs()),
                    psi_rendering: v.psi.render("n"),
                    sequence_part: ClosedFormJson::from_closed_form(&v.sequence_part),
                    identities: v.identities.len(),
                })
                .collect(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closer::{solve_problem, BasisKind};

    const COLL: &str = r#"{
        "sequences": [{"name": "F", "builtin": "fibonacci"}],
        "sum": [{"seq": "F", "a": 0, "b": 1}, {"seq": "F", "a": 0, "b": 1}, {"seq": "F", "a": 2, "b": -1}]
    }"#;

    #[test]
    fn rationals_accept_strings_and_integers() {
        assert_eq!(parse_rational(&Value::from("3/6")).unwrap(), ExactScalar::new(1.into(), 2.into()));
        assert_eq!(parse_rational(&Value::from(-4)).unwrap(), ExactScalar::from_integer((-4).into()));
        assert!(parse_rational(&Value::from("1/0")).is_err());
        assert!(parse_rational(&Value::from(0.5)).is_err());
        assert_eq!(serde_json::to_string(&Rational(ExactScalar::new(3.into(), (-6).into()))).unwrap(), "\"-1/2\"");
    }

    #[test]
    fn envelope_round_trip() {
        let file = ProblemFile::from_json(COLL).unwrap();
        let reg = file.registry().unwrap();
        let p = file.problem(&reg).unwrap();
        let sol = solve_problem(&p, BasisKind::Shifted, &file.options()).unwrap();
        let env = ResultEnvelope::new(&p, &sol, None).unwrap();
        let text = to_json(&env);
        let back = ResultEnvelope::from_json(&text).unwrap();
        assert_eq!(back, env);
        assert_eq!(to_json(&back), text);
        let from_json = back.closed_form.to_closed_form(&reg).unwrap();
        let from_text = parse(&back.rendering, &|n| reg.resolve(n)).unwrap();
        assert_eq!(from_json, from_text);
        assert_eq!(from_json, sol.particular);
        assert_eq!(env.m, 8);
    }

    #[test]
    fn builtins_resolve_without_declaration() {
        let file = ProblemFile::from_json(r#"{"sum": [{"seq": "fibonacci", "a": 0, "b": 1}]}"#).unwrap();
        let reg = file.registry().unwrap();
        assert!(file.problem(&reg).is_ok());
        let file = ProblemFile::from_json(r#"{"sum": [{"seq": "G", "a": 0, "b": 1}]}"#).unwrap();
        assert!(matches!(file.problem(&file.registry().unwrap()), Err(Error::Invalid(_))));
    }

    #[test]
    fn malformed_files_are_invalid() {
        assert!(matches!(ProblemFile::from_json("{"), Err(Error::Invalid(_))));
        assert!(matches!(ProblemFile::from_json(r#"{"sum": [], "bogus": 1}"#), Err(Error::Invalid(_))));
        let spec = SequenceSpec {
            name: "F".into(),
            builtin: Some("fibonacci".into()),
            params: vec![],
            recurrence: Some(vec![]),
            initials: None,
        };
        assert!(spec.build().is_err());
    }

    #[test]
    fn closed_form_inputs() {
        let reg = Registry::new(&[]).unwrap();
        let a = closed_form_from_value(&Value::from("fibonacci(n+1) - 1"), &reg).unwrap();
        let b = closed_form_from_value(
            &serde_json::json!({"terms": [
                {"poly": ["-1"], "factors": []},
                {"poly": [1], "factors": [{"seq": "fibonacci", "alpha": 1, "shift": 1}]}
            ]}),
            &reg,
        )
        .unwrap();
        assert_eq!(a, b);
        let c = closed_form_from_value(&serde_json::json!({"text": "fibonacci(n+1) - 1"}), &reg).unwrap();
        assert_eq!(a, c);
    }
}
