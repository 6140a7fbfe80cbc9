use qschur::canonical::{canonical_schur, CanonicalExpansion, DEFAULT_CAP};
use qschur::crystal::{crystal_graph, CrystalGraph};
use qschur::schur::{phi_monomial, PsiReading, SchurElement, UdotMonomial};
use qschur::transfer::{canonical_sweep, MonomialSpan, TransferReport, Verdict};
use qschur::{FlagSymbol, PeriodicMatrix};

#[test]
fn parse_compute_serialize() {
    let p: FlagSymbol = "n=2;D=2;[2,1]".parse().unwrap();
    assert_eq!(p.x_stat(), 1);
    let s: PeriodicMatrix = "n=2;D=2;[[1,2,1],[2,1,1]]".parse().unwrap();
    let b = canonical_schur(&s, DEFAULT_CAP).unwrap();
    let js = serde_json::to_string(&b).unwrap();
    let back: CanonicalExpansion<PeriodicMatrix> = serde_json::from_str(&js).unwrap();
    assert_eq!(back, b);
}

#[test]
fn monomial_images_multiply() {
    let m: UdotMonomial = "e1 f1 a(1,1)".parse().unwrap();
    let x = phi_monomial(&m, 2, 2).unwrap();
    let id = SchurElement::identity(2, 2);
    assert_eq!(id.mul(&x).unwrap(), x);
    assert_eq!(x.mul(&id).unwrap(), x);
}

#[test]
fn crystal_graph_json() {
    let g = crystal_graph(2, 2, 1, 3, None).unwrap();
    let js = serde_json::to_string(&g).unwrap();
    let back: CrystalGraph = serde_json::from_str(&js).unwrap();
    assert_eq!(back, g);
    assert!(js.contains("\"D\":2"));
}

#[test]
fn transfer_reports_serialize() {
    let reports = canonical_sweep(2, 1, 1, 3, 2, PsiReading::MatrixShift).unwrap();
    assert!(reports.iter().all(|r| r.verdict != Verdict::Counterexample));
    let js = serde_json::to_value(&reports).unwrap();
    assert!(js[0].get("route-A").is_some() && js[0].get("route-B").is_some());
    let back: Vec<TransferReport> = serde_json::from_value(js).unwrap();
    assert_eq!(back, reports);
}

#[test]
fn empty_span_rejects_everything_but_zero() {
    let span = MonomialSpan::new(2, 3).unwrap();
    assert_eq!(span.dimension(), 0);
    assert!(span.contains(&SchurElement::zero(2, 3)));
    let lam = FlagSymbol::from_weight(&[2, 1]).unwrap();
    assert!(!span.contains(&SchurElement::idempotent(&lam)));
}
