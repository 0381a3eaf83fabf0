//! The command implementations behind the binary.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use dismantle::classify::{
    computed_membership_with, is_prime_power, predicted_membership, profile, Computed, GroupProfile, Membership,
    MembershipVerdict,
};
use dismantle::group::{build_group_with_cap, parse_spec, Group, GroupSpec, DEFAULT_ORDER_CAP};
use dismantle::lattice::{
    brute_force_dismantlable, build_lattice_with_limit, dismantle, find_boolean_cube, find_crown, lattice_laws,
    validate_crown, Lattice, SearchOptions, DEFAULT_CROWN_BUDGET,
};
use dismantle::subgroups::{subgroup_conjugacy_classes, DEFAULT_SUBGROUP_LIMIT};
use dismantle::{Error, Result};

use crate::corpus::{self, Bounds, Entry, Family};
use crate::report::{Report, Suite, SuiteRow, Survey, SurveyRow, Timings, Witness, SCHEMA};

/// Lattices up to this size get their modular and distributive laws reported.
pub const LAWS_LIMIT: usize = 2048;

/// Default subgroup limit for the suite, large enough for the elementary
/// abelian group of order 128 (29212 subgroups).
pub const SUITE_SUBGROUP_LIMIT: usize = 40_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub order_cap: usize,
    pub subgroup_limit: usize,
    /// Largest crown searched for a certificate; automatic when unset.
    pub crown_bound: Option<usize>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            order_cap: DEFAULT_ORDER_CAP,
            subgroup_limit: DEFAULT_SUBGROUP_LIMIT,
            crown_bound: None,
        }
    }
}

impl Caps {
    fn crown_options(&self) -> Option<SearchOptions> {
        self.crown_bound.map(|max_order| SearchOptions {
            max_order,
            budget: DEFAULT_CROWN_BUDGET,
        })
    }
}

/// Everything computed for one group.
pub struct Analysis {
    pub spec: GroupSpec,
    pub group: Group,
    pub lattice: Lattice,
    pub profile: GroupProfile,
    pub verdict: MembershipVerdict,
    pub timings: Timings,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

pub fn analyze(spec: &GroupSpec, caps: &Caps) -> Result<Analysis> {
    let t = Instant::now();
    let group = build_group_with_cap(spec, caps.order_cap)?;
    let group_ms = ms(t);
    let t = Instant::now();
    let lattice = build_lattice_with_limit(&group, caps.subgroup_limit)?;
    let lattice_ms = ms(t);
    let t = Instant::now();
    let prof = profile(&group, &lattice)?;
    let predicted = predicted_membership(&group, &prof);
    let computed = computed_membership_with(&lattice, caps.crown_options())?;
    let verdict_ms = ms(t);
    Ok(Analysis {
        spec: spec.clone(),
        group,
        lattice,
        profile: prof,
        verdict: MembershipVerdict { predicted, computed },
        timings: Timings {
            group_ms,
            lattice_ms,
            verdict_ms,
        },
    })
}

pub fn report(a: &Analysis, with_timings: bool) -> Result<Report> {
    let lat = &a.lattice;
    let computed = a.verdict.computed.membership();
    let boolean_cube = match computed {
        Membership::NotInD => find_boolean_cube(lat).map(|t| t.iter().map(|&v| lat.label(v).to_string()).collect()),
        _ => None,
    };
    Ok(Report {
        schema: SCHEMA,
        spec: a.spec.to_string(),
        order: a.group.order(),
        subgroups: lat.len(),
        profile: a.profile.clone(),
        predicted: a.verdict.predicted,
        computed,
        agrees: a.verdict.agrees(),
        witness: Witness::from_computed(lat, &a.verdict.computed)?,
        laws: (lat.len() <= LAWS_LIMIT).then(|| lattice_laws(lat)),
        boolean_cube,
        timings: with_timings.then_some(a.timings),
    })
}

/// Timings are wall-clock and vary between runs, so they are opt-in.
pub fn check(text: &str, caps: &Caps, with_timings: bool) -> Result<Report> {
    let spec = parse_spec(text)?;
    report(&analyze(&spec, caps)?, with_timings)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_report(r: &Report) -> String {
    let mut out = String::new();
    let p = &r.profile;
    let _ = writeln!(out, "group       {} (order {}, {} subgroups)", r.spec, r.order, r.subgroups);
    let mut traits = Vec::new();
    traits.push(if p.is_cyclic {
        "cyclic"
    } else if p.is_abelian {
        "abelian"
    } else {
        "non-abelian"
    });
    if let Some(q) = p.p_group {
        traits.push(if q == 2 { "2-group" } else { "p-group" });
    }
    traits.push(if p.is_nilpotent { "nilpotent" } else { "not nilpotent" });
    if p.is_hamiltonian {
        traits.push("hamiltonian");
    }
    traits.push(if p.is_metacyclic { "metacyclic" } else { "not metacyclic" });
    let _ = writeln!(out, "profile     {}", traits.join(", "));
    let _ = writeln!(out, "spectrum    {}", if p.order_spectrum_ok { "ok" } else { "three or more primes in one element order" });
    if let Some(inv) = &p.abelian_invariants {
        let _ = writeln!(out, "invariants  {inv:?}");
    }
    match r.predicted.rule {
        Some(rule) => {
            let _ = writeln!(out, "predicted   {} ({rule})", r.predicted.verdict);
        }
        None => {
            let _ = writeln!(out, "predicted   unknown");
        }
    }
    let _ = writeln!(out, "computed    {}", r.computed);
    match &r.witness {
        Witness::Elimination { order } => {
            let _ = writeln!(out, "elimination {}", order.join(" "));
        }
        Witness::Crown { xs, ys } => {
            let _ = writeln!(out, "crown       order {}", 2 * xs.len());
            for (x, y) in xs.iter().zip(ys) {
                let _ = writeln!(out, "            {x} < {y}");
            }
        }
        Witness::Stuck { residue, note } => {
            let _ = writeln!(out, "stuck       {} subgroups remain; {note}", residue.len());
        }
    }
    if let Some(laws) = r.laws {
        let _ = writeln!(out, "modular     {}", yes_no(laws.modular));
        let _ = writeln!(out, "distributive {}", yes_no(laws.distributive));
    }
    if let Some(cube) = &r.boolean_cube {
        let _ = writeln!(out, "cube        {}", cube.join(" "));
    }
    let _ = writeln!(out, "agreement   {}", yes_no(r.agrees));
    out
}

pub const SURVEY_NOTE: &str =
    "one row per conjugacy class of subgroups; distinct classes may still be isomorphic as abstract groups";

pub fn survey(text: &str, min_order: usize, caps: &Caps) -> Result<Survey> {
    let spec = parse_spec(text)?;
    let g = build_group_with_cap(&spec, caps.order_cap)?;
    let lat = build_lattice_with_limit(&g, caps.subgroup_limit)?;
    let classes = subgroup_conjugacy_classes(&g, &lat)?;
    let rows = classes
        .par_iter()
        .filter(|class| lat.subgroup(class[0]).expect("subgroup lattice").order() >= min_order)
        .map(|class| -> Result<SurveyRow> {
            let h = lat.subgroup(class[0]).expect("subgroup lattice");
            let hg = g.restrict(h)?;
            let hl = build_lattice_with_limit(&hg, caps.subgroup_limit)?;
            let prof = profile(&hg, &hl)?;
            let predicted = predicted_membership(&hg, &prof);
            let computed = computed_membership_with(&hl, caps.crown_options())?;
            if let Computed::NotInD { obstruction } = &computed {
                if obstruction.crown.as_ref().is_some_and(|c| !validate_crown(&hl, c)) {
                    return Err(Error::Mismatch("crown failed validation".into()));
                }
            }
            Ok(SurveyRow {
                ambient: spec.to_string(),
                representative: lat.label(class[0]).to_string(),
                order: h.order(),
                class_size: class.len(),
                computed_in_d: computed.membership() == Membership::InD,
                is_metacyclic: prof.is_metacyclic,
                predicted,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let counterexample = rows.iter().any(|r| r.computed_in_d && !r.is_metacyclic);
    Ok(Survey {
        schema: SCHEMA,
        ambient: spec.to_string(),
        note: SURVEY_NOTE.into(),
        rows,
        counterexample,
    })
}

pub fn render_survey(s: &Survey) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}: {}", s.ambient, s.note);
    let _ = writeln!(out, "{:>5}  {:>5}  {:<5}  {:<10}  {:<32}  representative", "order", "class", "in D", "metacyclic", "predicted");
    for r in &s.rows {
        let predicted = match r.predicted.rule {
            Some(rule) => format!("{} ({rule})", r.predicted.verdict),
            None => "unknown".into(),
        };
        let _ = writeln!(
            out,
            "{:>5}  {:>5}  {:<5}  {:<10}  {:<32}  {}",
            r.order,
            r.class_size,
            yes_no(r.computed_in_d),
            yes_no(r.is_metacyclic),
            predicted,
            r.representative
        );
    }
    if s.counterexample {
        let _ = writeln!(out, "!!! counterexample to open problem: yes (a member of the class that is not metacyclic)");
    } else {
        let _ = writeln!(out, "counterexample to open problem: no (consistent with the open problem)");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

/// Deterministic output: no timings, stable node order.
pub fn export(text: &str, format: ExportFormat, caps: &Caps) -> Result<String> {
    let spec = parse_spec(text)?;
    match format {
        ExportFormat::Dot => {
            let g = build_group_with_cap(&spec, caps.order_cap)?;
            Ok(build_lattice_with_limit(&g, caps.subgroup_limit)?.to_dot())
        }
        ExportFormat::Json => {
            let r = report(&analyze(&spec, caps)?, false)?;
            Ok(serde_json::to_string_pretty(&r).expect("reports serialize") + "\n")
        }
    }
}

/// A corpus entry with its analysis.
pub struct Analyzed {
    pub entry: Entry,
    pub result: Result<Analysis>,
}

pub fn analyze_corpus(bounds: &Bounds, caps: &Caps) -> Vec<Analyzed> {
    corpus::corpus(bounds)
        .into_par_iter()
        .map(|entry| {
            let result = analyze(&entry.spec, caps);
            Analyzed { entry, result }
        })
        .collect()
}

fn row(name: &str, passed: bool, detail: String) -> SuiteRow {
    SuiteRow {
        name: name.into(),
        passed,
        detail,
    }
}

fn divisor_count_and_sum(n: usize) -> (usize, usize) {
    (1..=n).filter(|d| n % d == 0).fold((0, 0), |(c, s), d| (c + 1, s + d))
}

/// Runs every classification statement over the corpus.
pub fn verify_paper(bounds: &Bounds, caps: &Caps) -> Suite {
    let all = analyze_corpus(bounds, caps);
    let mut rows = Vec::new();
    let errors: Vec<String> = all
        .iter()
        .filter_map(|a| a.result.as_ref().err().map(|e| format!("{}: {e}", a.entry.spec)))
        .collect();
    rows.push(row(
        "corpus builds within caps",
        errors.is_empty(),
        if errors.is_empty() {
            format!("{} groups", all.len())
        } else {
            errors.join("; ")
        },
    ));
    let ok: Vec<(&Entry, &Analysis)> = all
        .iter()
        .filter_map(|a| a.result.as_ref().ok().map(|r| (&a.entry, r)))
        .collect();
    let in_d = |a: &Analysis| a.verdict.computed.membership() == Membership::InD;

    // Symmetric and alternating groups.
    let expected = corpus::symmetric_alternating();
    let bad: Vec<String> = expected
        .iter()
        .filter(|(s, member)| !ok.iter().any(|(e, a)| &e.spec == s && in_d(a) == *member))
        .map(|(s, _)| s.to_string())
        .collect();
    rows.push(row("A3, A4, S3 in D; A5, S4 not", bad.is_empty(), mismatch_detail(&bad, expected.len())));

    // Explicit crowns.
    let mut crown_bad = Vec::new();
    for named in corpus::permutation_crowns().into_iter().chain([corpus::dihedral_24_crown()]) {
        let valid = ok
            .iter()
            .find(|(e, _)| e.spec == named.ambient)
            .and_then(|(_, a)| named.resolve(&a.group, &a.lattice).ok().map(|c| validate_crown(&a.lattice, &c)));
        if valid != Some(true) {
            crown_bad.push(named.ambient.to_string());
        }
    }
    rows.push(row("explicit crowns in A5, S4, D24", crown_bad.is_empty(), mismatch_detail(&crown_bad, 3)));

    // Abelian groups.
    let abelian: Vec<_> = ok.iter().filter(|(e, _)| e.family == Family::Abelian).collect();
    let bad: Vec<String> = abelian
        .iter()
        .filter(|(_, a)| a.verdict.predicted.verdict != a.verdict.computed.membership())
        .map(|(e, _)| e.spec.to_string())
        .collect();
    rows.push(row(
        &format!("abelian groups of order <= {}: predicted = computed", bounds.abelian_max),
        bad.is_empty(),
        mismatch_detail(&bad, abelian.len()),
    ));

    // Dihedral groups.
    let dihedral: Vec<_> = ok.iter().filter(|(e, _)| e.family == Family::Dihedral).collect();
    let bad: Vec<String> = dihedral
        .iter()
        .filter(|(e, a)| match e.spec {
            GroupSpec::Dihedral(total) => in_d(a) != is_prime_power(total / 2),
            _ => true,
        })
        .map(|(e, _)| e.spec.to_string())
        .collect();
    rows.push(row(
        &format!("D_2n for 2 <= n <= {}: in D iff n is a prime power", bounds.dihedral_max),
        bad.is_empty(),
        mismatch_detail(&bad, dihedral.len()),
    ));

    // p-groups with a cyclic maximal subgroup.
    let cm: Vec<_> = ok.iter().filter(|(e, _)| e.family == Family::CyclicMaximal).collect();
    let bad: Vec<String> = cm.iter().filter(|(_, a)| !in_d(a)).map(|(e, _)| e.spec.to_string()).collect();
    rows.push(row("M(p^n), D, Q, QD 2-groups in D", bad.is_empty(), mismatch_detail(&bad, cm.len())));

    // Hamiltonian groups.
    let ham: Vec<_> = ok.iter().filter(|(e, _)| e.family == Family::Hamiltonian).collect();
    let members: Vec<String> = ham.iter().filter(|(_, a)| in_d(a)).map(|(e, _)| e.spec.to_string()).collect();
    rows.push(row(
        "hamiltonian groups: only Q8 in D",
        members == ["Ham:0"] && ham.len() == corpus::hamiltonians().len(),
        format!("in D: {}", members.join(", ")),
    ));

    // Agreement and necessary conditions.
    let bad: Vec<String> = ok
        .iter()
        .filter(|(_, a)| !a.verdict.agrees())
        .map(|(e, a)| format!("{} ({:?})", e.spec, a.verdict.predicted.rule))
        .collect();
    let decided = ok.iter().filter(|(_, a)| a.verdict.predicted.verdict != Membership::Unknown).count();
    rows.push(row(
        "predictions agree with computation",
        bad.is_empty(),
        format!("{decided} decided; {}", mismatch_detail(&bad, ok.len())),
    ));
    let bad: Vec<String> = ok
        .iter()
        .filter(|(_, a)| in_d(a) && !a.profile.order_spectrum_ok)
        .map(|(e, _)| e.spec.to_string())
        .collect();
    rows.push(row("members have element orders p^n or p^n q^m", bad.is_empty(), mismatch_detail(&bad, ok.len())));
    let bad: Vec<String> = ok
        .iter()
        .filter(|(_, a)| {
            let p = &a.profile;
            in_d(a) && p.is_nilpotent && !(p.is_cyclic || (p.p_group.is_some() && p.has_ppp_section == Some(false)))
        })
        .map(|(e, _)| e.spec.to_string())
        .collect();
    rows.push(row(
        "nilpotent members are cyclic or (p,p,p)-free p-groups",
        bad.is_empty(),
        mismatch_detail(&bad, ok.len()),
    ));

    // Lattice-level cross-checks.
    let mut bad = Vec::new();
    let mut checked = 0;
    for (e, a) in &ok {
        let lat = &a.lattice;
        if lat.len() <= 40 {
            checked += 1;
            let bound = (lat.len() / 2 * 2).max(6);
            let crown = find_crown(lat, bound).ok().and_then(|s| s.crown().cloned());
            if crown.as_ref().is_some_and(|c| !validate_crown(lat, c)) || crown.is_some() == in_d(a) {
                bad.push(e.spec.to_string());
            }
        }
    }
    rows.push(row("not dismantlable iff a crown exists (<= 40 subgroups)", bad.is_empty(), mismatch_detail(&bad, checked)));

    let mut bad = Vec::new();
    let mut checked = 0;
    for (e, a) in &ok {
        let lat = &a.lattice;
        if lattice_laws(lat).modular {
            checked += 1;
            let crown6 = find_crown(lat, 6).ok().and_then(|s| s.crown().cloned()).is_some();
            let cube = find_boolean_cube(lat).is_some();
            if crown6 == in_d(a) || cube == in_d(a) {
                bad.push(e.spec.to_string());
            }
        }
    }
    rows.push(row("modular lattices: not in D iff 6-crown iff cube", bad.is_empty(), mismatch_detail(&bad, checked)));

    let mut bad = Vec::new();
    let mut checked = 0;
    for (e, a) in &ok {
        if a.lattice.len() <= 12 {
            checked += 1;
            if brute_force_dismantlable(&a.lattice).ok() != Some(dismantle(&a.lattice).is_dismantlable()) {
                bad.push(e.spec.to_string());
            }
        }
    }
    for (i, lat) in corpus::random_lattices(500, 0).iter().enumerate() {
        checked += 1;
        if brute_force_dismantlable(lat).ok() != Some(dismantle(lat).is_dismantlable()) {
            bad.push(format!("random #{i}"));
        }
    }
    rows.push(row("greedy dismantling matches exhaustive search", bad.is_empty(), mismatch_detail(&bad, checked)));

    let small: Vec<_> = ok.iter().filter(|(_, a)| a.lattice.len() <= 7).collect();
    let bad: Vec<String> = small.iter().filter(|(_, a)| !in_d(a)).map(|(e, _)| e.spec.to_string()).collect();
    rows.push(row("lattices with at most 7 elements dismantle", bad.is_empty(), mismatch_detail(&bad, small.len())));

    // Subgroup counts.
    let mut bad = Vec::new();
    let mut checked = 0;
    for (e, a) in &ok {
        let expected = match (&e.family, &e.spec) {
            (Family::Dihedral, GroupSpec::Dihedral(total)) => {
                let (t, s) = divisor_count_and_sum(total / 2);
                Some(t + s)
            }
            (Family::Cyclic, spec) => corpus::cyclic_prime_powers()
                .into_iter()
                .find(|(s, _)| s == spec)
                .map(|(_, n)| n),
            (_, GroupSpec::Symmetric(4)) => Some(30),
            _ => None,
        };
        if let Some(n) = expected {
            checked += 1;
            if a.lattice.len() != n {
                bad.push(format!("{}: {} != {n}", e.spec, a.lattice.len()));
            }
        }
    }
    rows.push(row("subgroup counts", bad.is_empty(), mismatch_detail(&bad, checked)));

    // Survey of the open problem.
    for ambient in ["S:4", "S:5"] {
        let (passed, detail) = match survey(ambient, 1, caps) {
            Ok(s) => (
                true,
                format!(
                    "{} classes; {}",
                    s.rows.len(),
                    if s.counterexample {
                        "COUNTEREXAMPLE: a member that is not metacyclic"
                    } else {
                        "consistent with the open problem"
                    }
                ),
            ),
            Err(e) => (false, e.to_string()),
        };
        rows.push(row(&format!("survey of {ambient}"), passed, detail));
    }

    Suite { schema: SCHEMA, rows }
}

fn mismatch_detail(bad: &[String], total: usize) -> String {
    if bad.is_empty() {
        format!("{total} checked")
    } else {
        format!("{} of {total} failed: {}", bad.len(), bad.join(", "))
    }
}

pub fn render_suite(s: &Suite) -> String {
    let mut out = String::new();
    for r in &s.rows {
        let _ = writeln!(out, "[{}] {} ({})", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_examples() {
        let r = check("Z:72", &Caps::default(), false).unwrap();
        assert_eq!(r.predicted.verdict, Membership::InD);
        assert_eq!(r.computed, Membership::InD);
        assert!(r.agrees);

        let r = check("Ab:3,3,3", &Caps::default(), false).unwrap();
        assert_eq!((r.predicted.verdict, r.computed), (Membership::NotInD, Membership::NotInD));
        assert!(r.boolean_cube.is_some());

        let r = check("A:5", &Caps::default(), false).unwrap();
        assert_eq!(r.computed, Membership::NotInD);
        match &r.witness {
            Witness::Crown { xs, .. } => assert!(xs.iter().all(|x| x.contains('('))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn survey_of_s3() {
        let s = survey("S:3", 1, &Caps::default()).unwrap();
        assert_eq!(s.rows.iter().map(|r| r.order).collect::<Vec<_>>(), vec![1, 2, 3, 6]);
        assert!(s.rows.iter().all(|r| r.computed_in_d));
        assert!(!s.counterexample);
    }

    #[test]
    fn survey_of_s4_has_eleven_classes() {
        let s = survey("S:4", 1, &Caps::default()).unwrap();
        assert_eq!(s.rows.len(), 11);
        // A4 is in the class but has no cyclic normal subgroup with cyclic quotient.
        let odd: Vec<_> = s.rows.iter().filter(|r| r.computed_in_d && !r.is_metacyclic).collect();
        assert_eq!(odd.len(), 1);
        assert_eq!((odd[0].order, odd[0].class_size), (12, 1));
        assert!(s.counterexample);
        assert_eq!(survey("S:4", 4, &Caps::default()).unwrap().rows.len(), 7);
    }

    #[test]
    fn exports_are_stable() {
        let caps = Caps::default();
        let dot = export("Q:8", ExportFormat::Dot, &caps).unwrap();
        assert_eq!(dot.matches("label=").count(), 6);
        assert_eq!(dot, export("Q:8", ExportFormat::Dot, &caps).unwrap());
        let chain = export("Z:8", ExportFormat::Dot, &caps).unwrap();
        assert_eq!(chain.matches(" -> ").count(), 3);
        let json = export("D:12", ExportFormat::Json, &caps).unwrap();
        let r: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(r.subgroups, 16);
        assert_eq!(json, export("D:12", ExportFormat::Json, &caps).unwrap());
    }

    #[test]
    fn divisor_functions() {
        assert_eq!(divisor_count_and_sum(6), (4, 12));
        assert_eq!(divisor_count_and_sum(1), (1, 1));
    }
}
