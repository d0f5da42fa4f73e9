use std::ffi::{CStr, CString};
use std::ptr;
use vistri_ffi::*;

const HOLES: [f64; 16] = [0., 0., 10., 0., 10., 10., 0., 10., 4., 4., 6., 4., 6., 6., 4., 6.];

fn holes() -> *mut VistriEngine {
    let mut e = ptr::null_mut();
    let s = unsafe { vistri_engine_new(HOLES.as_ptr(), [4usize, 4].as_ptr(), 2, &mut e) };
    assert_eq!(s, VistriStatus::Ok);
    assert!(!e.is_null());
    e
}

fn last_error() -> String {
    let p = vistri_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn region_and_free() {
    let e = holes();
    let (mut c, mut n) = (ptr::null_mut(), 0usize);
    let s = unsafe { vistri_visibility_region(e, 1.0, 1.0, ptr::null(), &mut c, &mut n) };
    assert_eq!(s, VistriStatus::Ok);
    assert!(n >= 4);
    let pts = unsafe { std::slice::from_raw_parts(c, 2 * n) };
    assert!(pts.chunks(2).any(|p| p == [0.0, 0.0]));
    unsafe { vistri_coords_free(c, n) };

    let d = 2.0;
    let s = unsafe { vistri_visibility_region(e, 2.0, 2.0, &d, &mut c, &mut n) };
    assert_eq!(s, VistriStatus::Ok);
    assert!(n > 300);
    unsafe {
        vistri_coords_free(c, n);
        vistri_engine_free(e);
    }
}

#[test]
fn other_queries() {
    let e = holes();
    let mut v = -1;
    assert_eq!(unsafe { vistri_two_point_visible(e, 2., 5., 8., 5., ptr::null(), &mut v) }, VistriStatus::Ok);
    assert_eq!(v, 0);
    assert_eq!(unsafe { vistri_two_point_visible(e, 2., 2., 8., 2., ptr::null(), &mut v) }, VistriStatus::Ok);
    assert_eq!(v, 1);

    let (mut hit, mut x, mut y) = (0, 0.0, 0.0);
    assert_eq!(unsafe { vistri_shoot_ray(e, 2., 5., 1., 0., ptr::null(), &mut hit, &mut x, &mut y) }, VistriStatus::Ok);
    assert_eq!((hit, x, y), (1, 4.0, 5.0));
    let d = 1.0;
    assert_eq!(unsafe { vistri_shoot_ray(e, 2., 5., 1., 0., &d, &mut hit, &mut x, &mut y) }, VistriStatus::Ok);
    assert_eq!(hit, 0);

    let (mut ids, mut n) = (ptr::null_mut(), 0usize);
    assert_eq!(unsafe { vistri_visible_vertices(e, 2., 5., ptr::null(), &mut ids, &mut n) }, VistriStatus::Ok);
    let got = unsafe { std::slice::from_raw_parts(ids, n) }.to_vec();
    assert_eq!(got, vec![0, 1, 2, 3, 4, 5]);
    unsafe { vistri_ids_free(ids, n) };

    let mut nv = 0;
    assert_eq!(unsafe { vistri_engine_num_vertices(e, &mut nv) }, VistriStatus::Ok);
    assert_eq!(nv, 8);
    unsafe { vistri_engine_free(e) };
}

#[test]
fn errors_set_last_error() {
    let e = holes();
    let (mut c, mut n) = (ptr::null_mut(), 0usize);
    assert_eq!(unsafe { vistri_visibility_region(e, 5., 5., ptr::null(), &mut c, &mut n) }, VistriStatus::Outside);
    assert!(c.is_null());
    assert!(last_error().contains("outside"));

    let bad = -1.0;
    assert_eq!(unsafe { vistri_visibility_region(e, 1., 1., &bad, &mut c, &mut n) }, VistriStatus::InvalidInput);
    assert_eq!(
        unsafe { vistri_visibility_region(e, f64::NAN, 1., ptr::null(), &mut c, &mut n) },
        VistriStatus::InvalidInput
    );
    assert_eq!(
        unsafe { vistri_visibility_region(ptr::null(), 1., 1., ptr::null(), &mut c, &mut n) },
        VistriStatus::NullArgument
    );
    let (mut hit, mut x, mut y) = (0, 0.0, 0.0);
    assert_eq!(unsafe { vistri_shoot_ray(e, 1., 1., 0., 0., ptr::null(), &mut hit, &mut x, &mut y) }, VistriStatus::InvalidInput);

    // a successful call clears the message
    let mut v = 0;
    assert_eq!(unsafe { vistri_two_point_visible(e, 1., 1., 2., 2., ptr::null(), &mut v) }, VistriStatus::Ok);
    assert!(vistri_last_error().is_null());
    unsafe { vistri_engine_free(e) };

    let mut e2 = ptr::null_mut();
    let tri = [0., 0., 1., 0.];
    assert_eq!(unsafe { vistri_engine_new(tri.as_ptr(), [2usize].as_ptr(), 1, &mut e2) }, VistriStatus::InvalidInput);
    assert!(e2.is_null());
    assert!(last_error().contains("at least 3"));
    assert_eq!(unsafe { vistri_engine_new(ptr::null(), ptr::null(), 0, &mut e2) }, VistriStatus::InvalidInput);
    unsafe { vistri_engine_free(ptr::null_mut()) };
}

#[test]
fn errors_are_thread_local() {
    let e = holes();
    let (mut c, mut n) = (ptr::null_mut(), 0usize);
    assert_eq!(unsafe { vistri_visibility_region(e, 5., 5., ptr::null(), &mut c, &mut n) }, VistriStatus::Outside);
    std::thread::spawn(|| assert!(vistri_last_error().is_null())).join().unwrap();
    assert!(!vistri_last_error().is_null());
    unsafe { vistri_engine_free(e) };
}

#[test]
fn map_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.map");
    std::fs::write(&p, "MAP v1\nRING 3\n0 0\n4 0\n0 4\n").unwrap();
    let path = CString::new(p.to_str().unwrap()).unwrap();
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { vistri_engine_from_file(path.as_ptr(), &mut e) }, VistriStatus::Ok);
    unsafe { vistri_engine_free(e) };
    let missing = CString::new(dir.path().join("none.map").to_str().unwrap()).unwrap();
    assert_eq!(unsafe { vistri_engine_from_file(missing.as_ptr(), &mut e) }, VistriStatus::Io);
    assert!(e.is_null());
}

#[test]
fn header_declares_api() {
    let h = include_str!(concat!(env!("OUT_DIR"), "/vistri.h"));
    for name in [
        "typedef struct VistriEngine VistriEngine",
        "vistri_engine_new",
        "vistri_engine_free",
        "vistri_visibility_region",
        "vistri_coords_free",
        "vistri_last_error",
        "VISTRI_STATUS_OUTSIDE = 3",
    ] {
        assert!(h.contains(name), "{name}");
    }
}

/// Compiles and runs a C program against the static library when a C
/// compiler is present.
#[test]
fn c_smoke_program() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if std::process::Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap();
    let lib = lib_dir.join("libvistri_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let st = std::process::Command::new(&cc)
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/smoke.c"))
        .arg("-I")
        .arg(env!("OUT_DIR"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(st.success());
    let out = std::process::Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
