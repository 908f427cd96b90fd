//! Section builders. Each runs one family of checks on an [`Instance`] and
//! never fails: errors become the section's status.

use drinfeld_core::drinfeld::{
    carlitz, reduce_at, reduction_sweep, reduction_type, FiniteAField, ReductionClass,
};
use drinfeld_core::endo::{rational_endomorphism_search, verify_str_bijective};
use drinfeld_core::function_field::{display_poly_compact, residue_field};
use drinfeld_core::galois::{image_evidence, inertia_report};
use drinfeld_core::laurent::{polygon_at_place, unramified_splitting_check, ValuationPlace};
use drinfeld_core::torsion::{frobenius_matrix, torsion_points, verify_module_structure};
use drinfeld_core::{CoeffField, Error, Place, PrimeIdeal};

use crate::config::{Instance, RunConfig};
use crate::report::*;

/// Reduction search range `|n| <= SCALING_BOUND` for the model `pi^-n phi pi^n`.
const SCALING_BOUND: u32 = 2;

fn status_of(e: &Error) -> Status {
    match e {
        Error::CertificationFailed(_) | Error::Internal(_) => Status::Falsified,
        _ => Status::Undetermined,
    }
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Passed
    } else {
        Status::Falsified
    }
}

fn label(inst: &Instance, p: &PrimeIdeal) -> String {
    display_poly_compact(&inst.fq, p.generator(), "T")
}

fn class_label(c: &ReductionClass) -> String {
    match c {
        ReductionClass::Good => "good".into(),
        ReductionClass::Stable { reduction_rank } => {
            format!("stable, reduction rank {reduction_rank}")
        }
        ReductionClass::Undetermined => "undetermined".into(),
    }
}

pub fn sweep(inst: &Instance, cfg: &RunConfig) -> SweepSection {
    let mut s = SweepSection {
        max_degree: cfg.scan_deg,
        ..Default::default()
    };
    let reports = match reduction_sweep(&inst.module, cfg.scan_deg, SCALING_BOUND) {
        Ok(r) => r,
        Err(e) => {
            s.status = status_of(&e);
            s.error = Some(e.to_string());
            return s;
        }
    };
    let mut ok = true;
    for rep in &reports {
        let Place::Finite(l) = &rep.place else {
            continue;
        };
        if *l == inst.prime {
            s.class_at_p = class_label(&rep.class);
            ok &= rep.class == ReductionClass::Stable { reduction_rank: 1 };
            continue;
        }
        s.primes_checked += 1;
        if rep.class == ReductionClass::Good {
            s.good += 1;
        } else {
            ok = false;
            s.exceptions
                .push(format!("{}: {}", label(inst, l), class_label(&rep.class)));
        }
    }
    s.status = pass_if(ok);
    s
}

pub fn reduction_at_p(inst: &Instance) -> ReductionAtPSection {
    let mut s = ReductionAtPSection::default();
    let rep = reduction_type(
        &inst.module,
        &Place::Finite(inst.prime.clone()),
        SCALING_BOUND,
    );
    s.scaling_exponent = rep.scaling_exponent;
    if let ReductionClass::Stable { reduction_rank } = rep.class {
        s.reduction_rank = Some(reduction_rank);
    }
    let Some(reduced) = rep.reduced else {
        s.status = Status::Falsified;
        s.error = Some(format!(
            "no stable model at p ({})",
            class_label(&rep.class)
        ));
        return s;
    };
    let c = carlitz(&FiniteAField::residue(&inst.fq, &inst.prime));
    s.reduced = Some(reduced.display());
    s.carlitz_identical = reduced.phi_t() == c.phi_t();
    match reduced.height() {
        Ok(h) => s.height = Some(h),
        Err(e) => s.error = Some(e.to_string()),
    }
    s.status = pass_if(s.reduction_rank == Some(1) && s.carlitz_identical && s.height == Some(1));
    s
}

pub fn inertia(inst: &Instance) -> InertiaSection {
    match inertia_report(&inst.module, &inst.prime) {
        Ok(rep) => InertiaSection {
            status: pass_if(rep.passed() && rep.height == 1),
            error: None,
            height: rep.height,
            connected_count: rep.connected_count,
            etale_count: rep.etale_count,
            reduction_torsion_count: rep.reduction_torsion_count,
            expected_total: rep.expected_total,
            polygon: rep.polygon.triples(),
            positive_slope_denominators: rep.positive_slope_denominators,
            product_law: rep.product_law,
            ramification_witness: rep.ramification_witness,
        },
        Err(e) => InertiaSection {
            status: status_of(&e),
            error: Some(e.to_string()),
            ..Default::default()
        },
    }
}

pub fn infinity(inst: &Instance, cfg: &RunConfig) -> InfinitySection {
    let mut s = InfinitySection {
        precision: cfg.precision,
        ..Default::default()
    };
    let d = inst.prime.degree();
    if d != 1 {
        s.status = Status::Skipped;
        s.note = Some(format!("out of scope: deg p = {d}"));
        return s;
    }
    match unramified_splitting_check(&inst.module, &inst.prime, cfg.level, cfg.precision) {
        Ok(rep) => {
            let q = inst.fq.order() as u64;
            let r = cfg.r as u32;
            s.polygon = rep.polygon.triples();
            s.reduced_root_count = Some(rep.reduced_root_count);
            s.levels = rep
                .levels
                .iter()
                .map(|l| LevelEntry {
                    level: l.level,
                    residue_degree: l.residue_degree,
                    root_count: l.root_count,
                    expected_root_count: q.pow(r * l.level as u32),
                    min_residual_valuation: l.min_residual_valuation,
                })
                .collect();
            let ok = s.levels.len() == cfg.level
                && s.levels.iter().all(|l| {
                    l.root_count == l.expected_root_count
                        && l.min_residual_valuation >= cfg.precision as i64
                });
            s.status = pass_if(ok);
        }
        Err(e) => {
            s.status = status_of(&e);
            s.error = Some(e.to_string());
        }
    }
    s
}

pub fn carlitz_endomorphisms(
    inst: &Instance,
    l: &PrimeIdeal,
    max_deg: usize,
) -> CarlitzEndoSection {
    let c = carlitz(&FiniteAField::residue(&inst.fq, l));
    let mut s = CarlitzEndoSection {
        prime: label(inst, l),
        module: c.display(),
        ..Default::default()
    };
    let mut ok = true;
    for m in 0..=max_deg {
        match verify_str_bijective(&c, m, None) {
            Ok(cert) => {
                ok &= cert.certified;
                s.entries.push(StrEntry {
                    degree_bound: m,
                    extension_degree: cert.extension_degree,
                    dimension: cert.dimension,
                    str_image_dimension: cert.expected_dimension,
                    all_in_image: cert.all_in_image,
                });
            }
            Err(e) => {
                s.status = status_of(&e);
                s.error = Some(e.to_string());
                return s;
            }
        }
    }
    s.status = pass_if(ok);
    s
}

pub fn rational_endomorphisms(inst: &Instance, cfg: &RunConfig) -> RationalEndoSection {
    let mut s = RationalEndoSection {
        module: inst.module.display(),
        degree_bound: cfg.r,
        coefficient_degree_bound: cfg.coef_deg,
        note:
            "bounded search over polynomial coefficients; corroborates End = A, does not prove it"
                .into(),
        ..Default::default()
    };
    match rational_endomorphism_search(&inst.module, cfg.r, cfg.coef_deg) {
        Ok(sp) => {
            s.dimension = sp.dimension();
            s.str_image_dimension = sp.str_dimension;
            s.basis = sp
                .basis
                .iter()
                .map(|u| inst.module.ring().display(u))
                .collect();
            s.status = pass_if(sp.consistent_with_a());
        }
        Err(e) => {
            s.status = status_of(&e);
            s.error = Some(e.to_string());
        }
    }
    s
}

pub fn image(inst: &Instance, cfg: &RunConfig) -> ImageSection {
    let mut s = ImageSection {
        scan_degree: cfg.scan_deg,
        note: "mod-p evidence only; each Frobenius matrix is taken in its own greedy basis".into(),
        ..Default::default()
    };
    match image_evidence(&inst.module, &inst.prime, cfg.scan_deg, cfg.cap) {
        Ok(ev) => {
            s.frobenius = ev
                .frobenius
                .iter()
                .map(|f| FrobeniusEntry {
                    prime: f.prime.clone(),
                    matrix: f.matrix.clone(),
                    charpoly: f.charpoly.clone(),
                })
                .collect();
            s.closure_order = ev.closure_order;
            s.cap_exceeded = ev.cap_exceeded;
            s.gl_order = ev.gl_order;
            s.index = ev.index;
            s.stable = ev.stable;
            s.skipped_primes = ev.skipped_primes.clone();
            s.status = if ev.cap_exceeded {
                Status::Undetermined
            } else {
                pass_if(ev.order_divides_gl())
            };
        }
        Err(e) => {
            s.status = status_of(&e);
            s.error = Some(e.to_string());
        }
    }
    s
}

/// `phi[f_p^level]` on the reduction at `l`, with Frobenius at `l` for level 1.
pub fn torsion(inst: &Instance, l: &PrimeIdeal, level: usize) -> TorsionSection {
    let mut s = TorsionSection {
        prime: label(inst, l),
        level,
        ..Default::default()
    };
    let run = |s: &mut TorsionSection| -> drinfeld_core::Result<bool> {
        if *l == inst.prime {
            return Err(Error::BadPrime(label(inst, l), "equals p".into()));
        }
        let reduced = reduce_at(&inst.module, l)?;
        let a = inst
            .field
            .poly_ring()
            .pow(inst.prime.generator(), level as u64);
        let t = torsion_points(&reduced, &a)?;
        let q = inst.fq.order();
        s.field_degree = t.ambient().degree() / inst.fq.degree();
        s.cardinality = t.cardinality();
        s.expected_cardinality = q.pow((inst.module.rank() * level * inst.prime.degree()) as u32);
        let cert = verify_module_structure(&t)?;
        s.module_rank = cert.module_rank;
        s.surjective_onto_previous = cert.surjective_onto_previous;
        if level == 1 {
            let fm = frobenius_matrix(&t, &cert.basis, &inst.prime)?;
            let k = residue_field(&inst.fq, &inst.prime);
            s.frobenius = Some(FrobeniusEntry {
                prime: label(inst, l),
                matrix: fm
                    .entries
                    .to_rows()
                    .iter()
                    .map(|row| row.iter().map(|x| k.display(x)).collect())
                    .collect(),
                charpoly: display_poly_compact(&k, &fm.charpoly(), "x"),
            });
        }
        Ok(s.cardinality == s.expected_cardinality
            && (level > 1 || s.module_rank == Some(inst.module.rank()))
            && s.surjective_onto_previous != Some(false))
    };
    match run(&mut s) {
        Ok(ok) => s.status = pass_if(ok),
        Err(e) => {
            s.status = status_of(&e);
            s.error = Some(e.to_string());
        }
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolygonPlace {
    P,
    Infinity,
}

pub fn polygon(inst: &Instance, place: PolygonPlace) -> PolygonSection {
    let mut s = PolygonSection::default();
    match place {
        PolygonPlace::P => {
            s.place = label(inst, &inst.prime);
            let sec = inertia(inst);
            s.polygon = sec.polygon;
            s.status = sec.status;
            s.error = sec.error;
            s.note = Some("polygon of phi_f at p = (f)".into());
        }
        PolygonPlace::Infinity => {
            s.place = "infinity".into();
            let field = &inst.field;
            let f = field.from_poly(inst.prime.generator());
            let ring = inst.module.ring();
            let g = ring.scale_left(
                &field.inv(&f).unwrap(),
                &inst.module.phi_a(inst.prime.generator()),
            );
            match polygon_at_place(field, &g, ValuationPlace::Infinity) {
                Ok(poly) => {
                    let qr = (inst.fq.order() as i64).pow(inst.module.rank() as u32);
                    s.polygon = poly.triples();
                    s.note = Some("polygon of (1/f) phi_f at infinity".into());
                    s.status = if inst.prime.degree() == 1 {
                        pass_if(s.polygon == vec![(0, 1, qr - 1)])
                    } else {
                        Status::Skipped
                    };
                }
                Err(e) => {
                    s.status = status_of(&e);
                    s.error = Some(e.to_string());
                }
            }
        }
    }
    s
}

/// Runs every section in order.
pub fn verify(cfg: &RunConfig, inst: &Instance) -> Report {
    let mut report = Report {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        module: inst.module.display(),
        good_reduction_sweep: sweep(inst, cfg),
        reduction_at_p: reduction_at_p(inst),
        inertia: inertia(inst),
        infinity: infinity(inst, cfg),
        carlitz_endomorphisms: carlitz_endomorphisms(inst, &inst.prime, cfg.max_deg),
        rational_endomorphisms: rational_endomorphisms(inst, cfg),
        image: image(inst, cfg),
        verdict: Verdict::Certified,
    };
    report.verdict = Verdict::from_statuses(&report.statuses());
    report
}

pub fn section_report<S>(cfg: &RunConfig, section: S, status: Status) -> SectionReport<S> {
    SectionReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        section,
        verdict: Verdict::from_statuses(&[status]),
    }
}
