use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use spectral_layers_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = sl_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn antitree(spec: &str, depth: usize) -> *mut SlGraph {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { sl_graph_antitree(c(spec).as_ptr(), depth, &mut g) }, SlStatus::Ok);
    g
}

#[test]
fn four_cycle_spectrum_through_handles() {
    let g = antitree("1,2,1,0;", 2);
    unsafe {
        assert_eq!(sl_graph_vertex_count(g), 4);
        assert_eq!(sl_graph_depth(g), 2);
        let mut needed = 0;
        let mut small = [0.0; 2];
        assert_eq!(
            sl_graph_eigenvalues(g, SlOperatorKind::Laplacian, small.as_mut_ptr(), 2, &mut needed),
            SlStatus::BufferTooSmall
        );
        assert_eq!(needed, 4);
        let mut ev = [0.0; 4];
        assert_eq!(
            sl_graph_eigenvalues(g, SlOperatorKind::Laplacian, ev.as_mut_ptr(), 4, &mut needed),
            SlStatus::Ok
        );
        for (x, y) in ev.iter().zip([0.0, 2.0, 2.0, 4.0]) {
            assert!((x - y).abs() < 1e-10);
        }
        let mut m = [0.0; 16];
        assert_eq!(
            sl_graph_compress(g, SlOperatorKind::Adjacency, m.as_mut_ptr(), 16, ptr::null_mut()),
            SlStatus::Ok
        );
        assert_eq!(&m[..4], &[0.0, 1.0, 1.0, 0.0]);
        sl_graph_free(g);
    }
}

#[test]
fn decompositions_reconcile() {
    let g = antitree("1;2,3", 5);
    unsafe {
        let mut generic = ptr::null_mut();
        assert_eq!(sl_graph_decompose(g, SlOperatorKind::Laplacian, 1e-10, &mut generic), SlStatus::Ok);
        let mut closed = ptr::null_mut();
        assert_eq!(
            sl_closed_form_antitree(c("1;2,3").as_ptr(), 5, SlOperatorKind::Laplacian, &mut closed),
            SlStatus::Ok
        );
        let mut passed = false;
        let mut dev = f64::NAN;
        assert_eq!(sl_reconcile(generic, closed, 1e-10, &mut passed, &mut dev), SlStatus::Ok);
        assert!(passed, "deviation {dev}");

        let mut info = SlBlockInfo::default();
        assert_eq!(sl_decomposition_block(closed, 0, &mut info), SlStatus::Ok);
        assert_eq!((info.start_sphere, info.len, info.multiplicity), (0, 6, 1));
        let mut a = vec![0.0; info.len - 1];
        let mut b = vec![0.0; info.len];
        assert_eq!(
            sl_decomposition_block_coefficients(closed, 0, a.as_mut_ptr(), a.len(), b.as_mut_ptr(), b.len()),
            SlStatus::Ok
        );
        assert!((a[0] - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(b[0], 2.0);
        let count = sl_decomposition_block_count(closed);
        assert_eq!(sl_decomposition_block(closed, count, &mut info), SlStatus::OutOfRange);

        let n = sl_graph_vertex_count(g);
        let mut dense = vec![0.0; n];
        let mut spec = vec![0.0; n];
        let mut written = 0;
        sl_graph_eigenvalues(g, SlOperatorKind::Laplacian, dense.as_mut_ptr(), n, ptr::null_mut());
        assert_eq!(sl_decomposition_spectrum(closed, 1e-13, spec.as_mut_ptr(), n, &mut written), SlStatus::Ok);
        assert_eq!(written, n);
        assert!(dense.iter().zip(&spec).all(|(x, y)| (x - y).abs() < 1e-8));

        sl_decomposition_free(generic);
        sl_decomposition_free(closed);
        sl_graph_free(g);
    }
}

#[test]
fn checks_and_lgf_round_trip() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(sl_graph_tree_cs(c("2").as_ptr(), c("0,1;0").as_ptr(), 3, &mut g), SlStatus::Ok);
        for check in [
            SlCheck::PathCommuting,
            SlCheck::StronglyPathCommuting,
            SlCheck::SphericallySymmetric,
            SlCheck::FamilyPreserving,
        ] {
            let mut passed = false;
            assert_eq!(sl_graph_check(g, check, 3, 3, &mut passed), SlStatus::Ok);
            assert!(passed, "{check:?}");
        }
        let mut text = ptr::null_mut();
        assert_eq!(sl_graph_to_lgf(g, &mut text), SlStatus::Ok);
        let mut h = ptr::null_mut();
        assert_eq!(sl_graph_from_lgf(text, &mut h), SlStatus::Ok);
        assert_eq!(sl_graph_vertex_count(h), 15);
        sl_string_free(text);
        sl_graph_free(h);
        sl_graph_free(g);
    }
}

#[test]
fn error_codes_and_messages() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(sl_graph_antitree(ptr::null(), 2, &mut g), SlStatus::NullPointer);
        assert_eq!(sl_graph_antitree(c("1,2;").as_ptr(), 4, &mut g), SlStatus::InvalidSequence);
        assert!(last_error().contains("exhausted"));
        assert!(g.is_null());
        assert_eq!(sl_graph_from_lgf(c("spheres 1 x").as_ptr(), &mut g), SlStatus::Parse);
        assert!(last_error().starts_with("line 1"));
        let bad = [0xffu8, 0];
        assert_eq!(sl_graph_from_lgf(bad.as_ptr().cast(), &mut g), SlStatus::InvalidUtf8);
        let mut passed = false;
        assert_eq!(
            sl_graph_check(ptr::null(), SlCheck::PathCommuting, 1, 1, &mut passed),
            SlStatus::NullPointer
        );
        let mut out = [0.0; 2];
        assert_eq!(
            sl_tridiagonal_eigenvalues([1.0, 1.0].as_ptr(), [1.0].as_ptr(), 2, 1e-14, out.as_mut_ptr()),
            SlStatus::Ok
        );
        assert!(sl_last_error_message().is_null());
        assert!((out[0]).abs() < 1e-12 && (out[1] - 2.0).abs() < 1e-12);
        sl_graph_free(ptr::null_mut());
        sl_decomposition_free(ptr::null_mut());
        sl_string_free(ptr::null_mut());
    }
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/spectral_layers.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["sl_graph_antitree", "sl_graph_decompose", "SL_STATUS_BUFFER_TOO_SMALL", "typedef struct SlGraph SlGraph"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile_dir();
    let src = dir.join("probe.c");
    std::fs::write(&src, "#include \"spectral_layers.h\"\nint main(void) { SlGraph *g = 0; return (int)sl_graph_vertex_count(g); }\n").unwrap();
    let Ok(status) = Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg(format!("-I{}", header.parent().unwrap().display()))
        .arg(&src)
        .status()
    else {
        eprintln!("cc not available; header compile check skipped");
        return;
    };
    assert!(status.success());
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("ffi-header-probe");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
