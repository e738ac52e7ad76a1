use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use iplus_ffi::*;

fn parse(src: &str) -> *mut IplusFunction {
    let c = CString::new(src).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { iplus_function_parse(c.as_ptr(), &mut f) },
        IplusStatus::Ok
    );
    assert!(!f.is_null());
    f
}

fn last_error() -> String {
    let p = iplus_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn print(f: *const IplusFunction) -> String {
    let mut need = 0;
    assert_eq!(
        unsafe { iplus_function_print(f, ptr::null_mut(), 0, &mut need) },
        IplusStatus::BufferTooSmall
    );
    let mut buf = vec![0 as std::ffi::c_char; need];
    assert_eq!(
        unsafe { iplus_function_print(f, buf.as_mut_ptr(), buf.len(), &mut need) },
        IplusStatus::Ok
    );
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn parse_eval_derivative_roundtrip() {
    let f = parse("z^2 + exp(z)");
    let mut w = IplusComplex { re: 0.0, im: 0.0 };
    let mut of = true;
    assert_eq!(
        unsafe { iplus_function_eval(f, IplusComplex { re: 0.0, im: 0.0 }, &mut w, &mut of) },
        IplusStatus::Ok
    );
    assert_eq!((w.re, w.im, of), (1.0, 0.0, false));

    let mut df = ptr::null_mut();
    assert_eq!(
        unsafe { iplus_function_derivative(f, &mut df) },
        IplusStatus::Ok
    );
    assert_eq!(print(df), "(((2.0)*z)+exp(z))");
    assert_eq!(print(f), "((z^2)+exp(z))");
    unsafe {
        iplus_function_free(df);
        iplus_function_free(f);
        iplus_function_free(ptr::null_mut());
    }
}

#[test]
fn errors_set_status_and_message() {
    let src = CString::new("sin(z)/z").unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { iplus_function_parse(src.as_ptr(), &mut f) },
        IplusStatus::ParseError
    );
    assert!(f.is_null());
    assert!(last_error().contains("not entire"));

    assert_eq!(
        unsafe { iplus_function_parse(ptr::null(), &mut f) },
        IplusStatus::NullPointer
    );
    let bytes = [0xffu8 as std::ffi::c_char, 0];
    assert_eq!(
        unsafe { iplus_function_parse(bytes.as_ptr(), &mut f) },
        IplusStatus::InvalidUtf8
    );

    let g = parse("z");
    let mut e = IplusExtremum {
        radius: 0.0,
        value: 0.0,
        arg_extremum: 0.0,
        samples_used: 0,
        refined: false,
    };
    assert_eq!(
        unsafe { iplus_min_modulus(g, -1.0, 4096, 1e-12, &mut e) },
        IplusStatus::InvalidArgument
    );
    assert!(last_error().contains("radius"));
    // A successful call clears the message.
    assert_eq!(
        unsafe { iplus_min_modulus(g, 2.0, 4096, 1e-12, &mut e) },
        IplusStatus::Ok
    );
    assert!(iplus_last_error().is_null());
    assert!((e.value - 2.0).abs() < 1e-12);
    assert_eq!(
        unsafe { iplus_max_modulus(ptr::null(), 2.0, 4096, 1e-12, &mut e) },
        IplusStatus::NullPointer
    );
    unsafe { iplus_function_free(g) };
}

#[test]
fn minmod_iteration_fills_buffer() {
    let f = parse("z^2");
    let mut verdict = IplusMinModVerdict::Undecided;
    let mut seq = [0.0; 3];
    let mut len = 0;
    let s = unsafe {
        iplus_iterate_min_modulus(
            f,
            2.0,
            50,
            1e50,
            &mut verdict,
            seq.as_mut_ptr(),
            seq.len(),
            &mut len,
        )
    };
    assert_eq!(s, IplusStatus::Ok);
    assert_eq!(verdict, IplusMinModVerdict::Diverges);
    assert!(len > 3);
    for (got, want) in seq.iter().zip([2.0, 4.0, 16.0]) {
        assert!((got - want).abs() < 1e-12 * want);
    }
    unsafe { iplus_function_free(f) };
}

#[test]
fn grid_classification_matches_core() {
    let f = parse("z^2");
    let policy = iplus_orbit_policy_default();
    assert_eq!(policy.budget, 200);
    let mut out = vec![9u8; 16 * 16];
    let s = unsafe {
        iplus_classify_grid(
            f,
            -2.0,
            2.0,
            -2.0,
            2.0,
            16,
            16,
            &policy,
            out.as_mut_ptr(),
            out.len(),
        )
    };
    assert_eq!(s, IplusStatus::Ok);
    let core = iplus::raster::classify_grid(
        &iplus::FunctionExpression::parse("z^2").unwrap(),
        &iplus::raster::GridSpec::new(
            iplus::domain::Rect::new(-2.0, 2.0, -2.0, 2.0).unwrap(),
            16,
            16,
        )
        .unwrap(),
        &iplus::orbits::OrbitPolicy::default(),
    );
    for (b, c) in out.iter().zip(&core.classes) {
        assert_eq!(*b, IplusPointClass::from(*c) as u8);
    }
    let s = unsafe {
        iplus_classify_grid(
            f,
            -2.0,
            2.0,
            -2.0,
            2.0,
            16,
            16,
            &policy,
            out.as_mut_ptr(),
            10,
        )
    };
    assert_eq!(s, IplusStatus::BufferTooSmall);
    let bad = IplusOrbitPolicy {
        budget: 0,
        ..policy
    };
    let mut cls = IplusPointClass::Undecided;
    let s = unsafe { iplus_classify_point(f, IplusComplex { re: 0.5, im: 0.0 }, &bad, &mut cls) };
    assert_eq!(s, IplusStatus::InvalidArgument);
    unsafe { iplus_function_free(f) };
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let lib = target_dir().join("libiplus_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: static library or C compiler unavailable");
        return;
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .args(["-std=c11", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
