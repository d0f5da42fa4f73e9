//! C interface to the visibility engine.
//!
//! Every function returns a [`VistriStatus`]; on failure a description is
//! available from [`vistri_last_error`] on the same thread. Arrays handed out
//! by the library are released with the matching `*_free` function.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use vistri::geom::validate_and_normalize;
use vistri::{DirVector, EngineConfig, Point, Ring, VisEngine};

/// Opaque engine handle.
pub struct VistriEngine {
    inner: VisEngine,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VistriStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Malformed geometry, coordinates or parameters.
    InvalidInput = 2,
    /// The query point is outside the environment.
    Outside = 3,
    /// A file could not be read or parsed.
    Io = 4,
    /// An internal error or caught panic.
    Internal = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn err(status: VistriStatus, msg: impl Into<String>) -> VistriStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning panics into `Internal`.
fn guard(f: impl FnOnce() -> VistriStatus) -> VistriStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            err(VistriStatus::Internal, format!("internal panic: {msg}"))
        }
    }
}

unsafe fn engine_ref<'a>(e: *const VistriEngine) -> Result<&'a VisEngine, VistriStatus> {
    e.as_ref().map(|e| &e.inner).ok_or_else(|| err(VistriStatus::NullArgument, "engine is null"))
}

unsafe fn range(r: *const f64) -> Result<Option<f64>, VistriStatus> {
    match r.as_ref() {
        None => Ok(None),
        Some(&d) if d >= 0.0 && d.is_finite() => Ok(Some(d)),
        Some(_) => Err(err(VistriStatus::InvalidInput, "range must be finite and nonnegative")),
    }
}

fn point(x: f64, y: f64) -> Result<Point, VistriStatus> {
    if x.is_finite() && y.is_finite() {
        Ok(Point::new(x, y))
    } else {
        Err(err(VistriStatus::InvalidInput, "coordinates must be finite"))
    }
}

/// Leaks `v` as a raw array; released by the matching free function.
fn hand_out<T>(v: Vec<T>, out: *mut *mut T, len: *mut usize) {
    let b = v.into_boxed_slice();
    unsafe {
        *len = b.len();
        *out = Box::into_raw(b) as *mut T;
    }
}

unsafe fn take_back<T>(p: *mut T, len: usize) {
    if !p.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(p, len)));
    }
}

fn store(engine: VisEngine, out: *mut *mut VistriEngine) -> VistriStatus {
    unsafe { *out = Box::into_raw(Box::new(VistriEngine { inner: engine })) };
    VistriStatus::Ok
}

/// Builds an engine from rings given as interleaved `x, y` coordinates.
/// `ring_sizes[i]` is the vertex count of ring `i`; the rings' coordinates
/// follow each other in `coords`. Rings are classified and oriented
/// automatically; rings that are not part of the connected region are dropped.
#[no_mangle]
pub unsafe extern "C" fn vistri_engine_new(
    coords: *const f64,
    ring_sizes: *const usize,
    num_rings: usize,
    out: *mut *mut VistriEngine,
) -> VistriStatus {
    guard(|| {
        if out.is_null() || (num_rings > 0 && (coords.is_null() || ring_sizes.is_null())) {
            return err(VistriStatus::NullArgument, "null argument");
        }
        *out = ptr::null_mut();
        let sizes = if num_rings == 0 { &[][..] } else { std::slice::from_raw_parts(ring_sizes, num_rings) };
        let Some(total) = sizes.iter().try_fold(0usize, |a, &n| a.checked_add(n)) else {
            return err(VistriStatus::InvalidInput, "ring sizes overflow");
        };
        let flat = if total == 0 { &[][..] } else { std::slice::from_raw_parts(coords, 2 * total) };
        let mut rings = Vec::with_capacity(num_rings);
        let mut at = 0;
        for &n in sizes {
            let pts = flat[2 * at..2 * (at + n)].chunks_exact(2).map(|c| Point::new(c[0], c[1])).collect();
            at += n;
            match Ring::new(pts) {
                Ok(r) => rings.push(r),
                Err(e) => return err(VistriStatus::InvalidInput, e.to_string()),
            }
        }
        let env = match validate_and_normalize(rings) {
            Ok((env, _)) => env,
            Err(e) => return err(VistriStatus::InvalidInput, e.to_string()),
        };
        match VisEngine::new(env, EngineConfig::default()) {
            Ok(e) => store(e, out),
            Err(e) => err(VistriStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Builds an engine from a `MAP v1` file.
#[no_mangle]
pub unsafe extern "C" fn vistri_engine_from_file(path: *const c_char, out: *mut *mut VistriEngine) -> VistriStatus {
    guard(|| {
        if path.is_null() || out.is_null() {
            return err(VistriStatus::NullArgument, "null argument");
        }
        *out = ptr::null_mut();
        let Ok(path) = CStr::from_ptr(path).to_str() else {
            return err(VistriStatus::InvalidInput, "path is not UTF-8");
        };
        let env = match vistri::io::load_map(path) {
            Ok((env, _)) => env,
            Err(e) => return err(VistriStatus::Io, format!("{path}: {e}")),
        };
        match VisEngine::new(env, EngineConfig::default()) {
            Ok(e) => store(e, out),
            Err(e) => err(VistriStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Releases an engine. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn vistri_engine_free(engine: *mut VistriEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

#[no_mangle]
pub unsafe extern "C" fn vistri_engine_num_vertices(engine: *const VistriEngine, out: *mut usize) -> VistriStatus {
    guard(|| {
        let e = match engine_ref(engine) {
            Ok(e) => e,
            Err(s) => return s,
        };
        if out.is_null() {
            return err(VistriStatus::NullArgument, "out is null");
        }
        *out = e.env().num_vertices();
        VistriStatus::Ok
    })
}

/// Visibility region of `(x, y)` as a ccw polygon of `*out_len` points stored
/// as interleaved coordinates. `range` may be null for unlimited visibility.
/// Free the array with [`vistri_coords_free`].
#[no_mangle]
pub unsafe extern "C" fn vistri_visibility_region(
    engine: *const VistriEngine,
    x: f64,
    y: f64,
    range: *const f64,
    out_coords: *mut *mut f64,
    out_len: *mut usize,
) -> VistriStatus {
    guard(|| {
        let (e, d, q) = match (engine_ref(engine), self::range(range), point(x, y)) {
            (Ok(e), Ok(d), Ok(q)) => (e, d, q),
            (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
        };
        if out_coords.is_null() || out_len.is_null() {
            return err(VistriStatus::NullArgument, "output pointer is null");
        }
        *out_coords = ptr::null_mut();
        *out_len = 0;
        match e.visibility_region(q, d) {
            Ok(Some(r)) => {
                let flat: Vec<f64> = r.polygon.iter().flat_map(|p| [p.x, p.y]).collect();
                let mut n = 0;
                hand_out(flat, out_coords, &mut n);
                *out_len = n / 2;
                VistriStatus::Ok
            }
            Ok(None) => err(VistriStatus::Outside, "query point is outside the environment"),
            Err(e) => err(VistriStatus::Internal, e.to_string()),
        }
    })
}

/// Releases a coordinate array of `len` points.
#[no_mangle]
pub unsafe extern "C" fn vistri_coords_free(coords: *mut f64, len: usize) {
    take_back(coords, 2 * len);
}

/// Sets `*out_visible` to 1 if the segment from `(qx, qy)` to `(px, py)` lies
/// in the environment (and within `range`), else 0.
#[no_mangle]
pub unsafe extern "C" fn vistri_two_point_visible(
    engine: *const VistriEngine,
    qx: f64,
    qy: f64,
    px: f64,
    py: f64,
    range: *const f64,
    out_visible: *mut i32,
) -> VistriStatus {
    guard(|| {
        let (e, d, q, p) = match (engine_ref(engine), self::range(range), point(qx, qy), point(px, py)) {
            (Ok(e), Ok(d), Ok(q), Ok(p)) => (e, d, q, p),
            (Err(s), ..) | (_, Err(s), ..) | (_, _, Err(s), _) | (.., Err(s)) => return s,
        };
        if out_visible.is_null() {
            return err(VistriStatus::NullArgument, "out_visible is null");
        }
        match e.two_point_visible(q, p, d) {
            Some(v) => {
                *out_visible = i32::from(v);
                VistriStatus::Ok
            }
            None => err(VistriStatus::Outside, "query point is outside the environment"),
        }
    })
}

/// First boundary point hit by the ray from `(x, y)` along `(dx, dy)`.
/// `*out_hit` is 0 when nothing is hit within `range`.
#[no_mangle]
pub unsafe extern "C" fn vistri_shoot_ray(
    engine: *const VistriEngine,
    x: f64,
    y: f64,
    dx: f64,
    dy: f64,
    range: *const f64,
    out_hit: *mut i32,
    out_x: *mut f64,
    out_y: *mut f64,
) -> VistriStatus {
    guard(|| {
        let (e, d, q) = match (engine_ref(engine), self::range(range), point(x, y)) {
            (Ok(e), Ok(d), Ok(q)) => (e, d, q),
            (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
        };
        if out_hit.is_null() || out_x.is_null() || out_y.is_null() {
            return err(VistriStatus::NullArgument, "output pointer is null");
        }
        let Some(u) = DirVector::new(dx, dy) else {
            return err(VistriStatus::InvalidInput, "direction must be finite and nonzero");
        };
        match e.shoot_ray(q, u, d) {
            Some(hit) => {
                *out_hit = i32::from(hit.is_some());
                let h = hit.unwrap_or(Point::new(f64::NAN, f64::NAN));
                *out_x = h.x;
                *out_y = h.y;
                VistriStatus::Ok
            }
            None => err(VistriStatus::Outside, "query point is outside the environment"),
        }
    })
}

/// Environment vertex ids visible from `(x, y)`, ascending. Free the array
/// with [`vistri_ids_free`].
#[no_mangle]
pub unsafe extern "C" fn vistri_visible_vertices(
    engine: *const VistriEngine,
    x: f64,
    y: f64,
    range: *const f64,
    out_ids: *mut *mut usize,
    out_len: *mut usize,
) -> VistriStatus {
    guard(|| {
        let (e, d, q) = match (engine_ref(engine), self::range(range), point(x, y)) {
            (Ok(e), Ok(d), Ok(q)) => (e, d, q),
            (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
        };
        if out_ids.is_null() || out_len.is_null() {
            return err(VistriStatus::NullArgument, "output pointer is null");
        }
        *out_ids = ptr::null_mut();
        *out_len = 0;
        match e.visible_vertices(q, None, d) {
            Some(mesh_ids) => {
                let mesh = e.mesh();
                let seen: std::collections::HashSet<usize> = mesh_ids.into_iter().collect();
                let ids: Vec<usize> =
                    (0..e.env().num_vertices()).filter(|&v| seen.contains(&mesh.mesh_vertex(v))).collect();
                hand_out(ids, out_ids, out_len);
                VistriStatus::Ok
            }
            None => err(VistriStatus::Outside, "query point is outside the environment"),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn vistri_ids_free(ids: *mut usize, len: usize) {
    take_back(ids, len);
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn vistri_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
