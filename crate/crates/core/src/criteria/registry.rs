//! Name-addressable criteria. Each check sits behind [`Criterion`] so the
//! command line can select one at runtime.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PolyType {
    I,
    #[default]
    II,
}

impl PolyType {
    pub fn as_str(&self) -> &'static str {
        match self {
            PolyType::I => "i",
            PolyType::II => "ii",
        }
    }

    pub fn parse(s: &str) -> Option<PolyType> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "1" => Some(PolyType::I),
            "ii" | "2" => Some(PolyType::II),
            _ => None,
        }
    }
}

/// Inputs shared by all criteria; each criterion reads the fields it needs.
/// Component numbers are 0-based here.
#[derive(Debug, Clone, Default)]
pub struct CriterionParams {
    pub index: Option<MultiIndex>,
    pub j: Option<usize>,
    pub k: Option<usize>,
    pub ell: Option<usize>,
    pub steps: Vec<usize>,
    pub poly_type: PolyType,
    pub q: Option<Polynomial>,
    pub p: Option<Polynomial>,
    pub n_conditions: Option<usize>,
    pub measure: usize,
    pub andreief: Option<AndreiefInput>,
}

impl CriterionParams {
    pub fn at(index: MultiIndex) -> Self {
        CriterionParams { index: Some(index), ..Default::default() }
    }

    fn index(&self) -> Result<&MultiIndex, CriterionError> {
        self.index.as_ref().ok_or_else(|| hyp("missing parameter: index"))
    }

    fn path(&self) -> Result<IncreasingPath, CriterionError> {
        Ok(IncreasingPath::new(self.index()?.clone(), self.steps.clone()))
    }
}

pub trait Criterion: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// Whether the criterion is evaluated per multi-index.
    fn indexed(&self) -> bool {
        true
    }
    fn run(&self, system: &MeasureSystem, params: &CriterionParams) -> Result<CriterionReport, CriterionError>;
}

macro_rules! criterion {
    ($ty:ident, $name:literal, $desc:literal, |$s:ident, $p:ident| $body:expr) => {
        pub struct $ty;
        impl Criterion for $ty {
            fn name(&self) -> &'static str {
                $name
            }
            fn description(&self) -> &'static str {
                $desc
            }
            fn run(&self, $s: &MeasureSystem, $p: &CriterionParams) -> Result<CriterionReport, CriterionError> {
                $body
            }
        }
    };
}

criterion!(ZeroII, "zero-ii", "zeros of P_n vs. non-normality of (x - z) mu", |s, p| {
    verify_zero_criterion_type_ii(s, p.index()?)
});

criterion!(ZeroI, "zero-i", "zeros of A_n^(j) vs. non-normality of n - e_j with (x - z) mu_j", |s, p| {
    verify_zero_criterion_type_i(s, p.index()?, p.j.unwrap_or(0))
});

criterion!(InterlaceII, "interlace-ii", "W(P_{n+e_j}, P_n) vs. the (x - z)^2 transform at n", |s, p| {
    verify_interlace_criterion_type_ii(s, p.index()?, p.j.unwrap_or(0))
});

criterion!(InterlaceNeighbors, "interlace-neighbors", "W(P_{n+e_j}, P_{n+e_k}) vs. the (x - z)^2 transform at n", |s, p| {
    verify_interlace_criterion_neighbors(s, p.index()?, p.j.unwrap_or(0), p.k.unwrap_or(1))
});

criterion!(InterlaceI, "interlace-i", "W(A_n^(j), A_{n-e_l}^(j)) vs. the (x - z)^2 mu_j transform at n - 2e_j", |s, p| {
    let j = p.j.unwrap_or(0);
    verify_interlace_criterion_type_i(s, p.index()?, p.ell.unwrap_or(j), j)
});

criterion!(PerturbationLemma, "perturbation", "mu_2 -> mu_2 + q mu_1 leaves P_n and A_n^(2) fixed", |s, p| {
    let q = p.q.clone().unwrap_or_else(Polynomial::zero);
    verify_perturbation_lemma(s, &q, p.index()?)
});

criterion!(AngelescoCount, "angelesco-count", "exactly n_j simple zeros of P_n inside each interval", |s, p| {
    verify_angelesco_zero_count(s, p.index()?)
});

criterion!(AtLocation, "at-location", "all zeros of P_n simple and inside the AT interval", |s, p| {
    verify_at_zero_location(s, p.index()?)
});

criterion!(NikishinLocation, "nikishin-location", "zeros of A_n^(j) simple and inside the second interval", |s, p| {
    verify_nikishin_type_i_location(s, p.index()?, p.j.unwrap_or(0))
});

criterion!(NikishinInterlacing, "nikishin-interlacing", "A_n^(j), A_{n-e_1}^(j), A_{n-e_2}^(j) pairwise interlace", |s, p| {
    verify_nikishin_type_i_interlacing(s, p.index()?, p.j.unwrap_or(0))
});

criterion!(HigherWronskian, "higher-wronskian", "Wronskian along an increasing path vs. the (x - z)^l transform", |s, p| {
    let j = (p.poly_type == PolyType::I).then(|| p.j.unwrap_or(0));
    verify_higher_wronskian(s, &p.path()?, p.poly_type, j)
});

criterion!(EvenWronskian, "even-wronskian", "Wronskian along an even-length path has no real zeros", |s, p| {
    let j = (p.poly_type == PolyType::I).then(|| p.j.unwrap_or(0));
    verify_even_wronskian_nonvanishing(s, &p.path()?, p.poly_type, j)
});

criterion!(QuasiOrthogonality, "quasiorthogonality", "a quasi-orthogonal polynomial has enough zeros inside", |s, p| {
    if p.measure >= s.r() {
        return Err(hyp(format!("measure {} out of range", p.measure + 1)));
    }
    let poly = match (&p.p, &p.index) {
        (Some(q), _) => q.clone(),
        (None, Some(n)) => solve_type_ii(s, n)?,
        (None, None) => return Err(hyp("missing parameter: p or index")),
    };
    let n_conditions = match (p.n_conditions, &p.index) {
        (Some(c), _) => c,
        (None, Some(n)) if n.r() > p.measure => n[p.measure],
        _ => return Err(hyp("missing parameter: n_conditions")),
    };
    let mut report = verify_quasiorthogonality(s.measure(p.measure), &poly, n_conditions)?;
    report.index = p.index.clone();
    Ok(report)
});

pub struct Andreief;

impl Criterion for Andreief {
    fn name(&self) -> &'static str {
        "andreief"
    }
    fn description(&self) -> &'static str {
        "generalized Andreief identity as an exact finite sum"
    }
    fn indexed(&self) -> bool {
        false
    }
    fn run(&self, system: &MeasureSystem, p: &CriterionParams) -> Result<CriterionReport, CriterionError> {
        let mut input = p.andreief.clone().ok_or_else(|| hyp("missing parameter: andreief"))?;
        if input.measure.is_empty() {
            if p.measure >= system.r() {
                return Err(hyp(format!("measure {} out of range", p.measure + 1)));
            }
            input.measure = system.measure(p.measure).clone();
        }
        verify_andreief(&input)
    }
}

/// Criteria keyed by name.
#[derive(Clone)]
pub struct CriterionRegistry {
    criteria: BTreeMap<String, Arc<dyn Criterion>>,
}

impl CriterionRegistry {
    pub fn empty() -> Self {
        CriterionRegistry { criteria: BTreeMap::new() }
    }

    pub fn register(&mut self, c: Arc<dyn Criterion>) {
        self.criteria.insert(c.name().to_string(), c);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Criterion>> {
        self.criteria.get(name).cloned()
    }

    pub fn names(&self) -> Vec<&str> {
        self.criteria.keys().map(String::as_str).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<dyn Criterion>> {
        self.criteria.values()
    }
}

impl Default for CriterionRegistry {
    fn default() -> Self {
        let mut r = CriterionRegistry::empty();
        let all: Vec<Arc<dyn Criterion>> = vec![
            Arc::new(ZeroII),
            Arc::new(ZeroI),
            Arc::new(InterlaceII),
            Arc::new(InterlaceNeighbors),
            Arc::new(InterlaceI),
            Arc::new(Andreief),
            Arc::new(PerturbationLemma),
            Arc::new(AngelescoCount),
            Arc::new(AtLocation),
            Arc::new(NikishinLocation),
            Arc::new(NikishinInterlacing),
            Arc::new(HigherWronskian),
            Arc::new(EvenWronskian),
            Arc::new(QuasiOrthogonality),
        ];
        for c in all {
            r.register(c);
        }
        r
    }
}
