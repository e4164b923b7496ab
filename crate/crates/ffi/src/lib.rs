//! C interface to `mobnet`.
//!
//! Objects cross the boundary as opaque handles created by `*_load` /
//! `*_build` functions and released with the matching `*_free`. Every
//! fallible function returns a [`MobnetStatus`]; on failure the message is
//! kept per thread and can be copied out with [`mobnet_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use mobnet::inclusiveness::{bound_f64, raw_index, IncomingCounts};
use mobnet::ingest::{load_dataset, CountryCode, Gender, InstitutionCode, StemClass};
use mobnet::metrics::{top_k, Direction, MetricsReport};
use mobnet::network::{CohortSlice, ConnectionSplit, GeoTable, Network, UniversePolicy};
use mobnet::pipeline::Study;
use num_traits::ToPrimitive;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MobnetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Data = 4,
    Undefined = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Loaded records and node universes.
pub struct MobnetStudy(Study);

/// One year's network.
pub struct MobnetNetwork(Network);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MobnetGender {
    All = 0,
    Female = 1,
    Male = 2,
    Unknown = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MobnetStem {
    All = 0,
    Stem = 1,
    NonStem = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MobnetDirection {
    Out = 0,
    In = 1,
}

/// Summary statistics. Ratios that are undefined on the network are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct MobnetMetrics {
    pub universe: usize,
    pub active: usize,
    pub sending: usize,
    pub receiving: usize,
    pub partnerships: usize,
    pub active_connections: usize,
    pub isolates: usize,
    pub density: f64,
    pub degree_centralization_all: f64,
    pub degree_centralization_out: f64,
    pub degree_centralization_in: f64,
    pub closeness_centralization_all: f64,
    pub closeness_centralization_out: f64,
    pub closeness_centralization_in: f64,
    pub assortativity: f64,
    pub reciprocity: f64,
    pub strength: u64,
    pub strength_stem: u64,
    pub strength_non_stem: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MobnetRankEntry {
    /// Node index, usable with [`mobnet_network_node_code`].
    pub node: usize,
    pub degree: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = message.into());
}

fn fail(status: MobnetStatus, message: impl Into<String>) -> MobnetStatus {
    set_error(message);
    status
}

fn guard<F: FnOnce() -> MobnetStatus>(body: F) -> MobnetStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(MobnetStatus::Panic, "internal panic"),
    }
}

/// # Safety
/// `s` is null or a NUL-terminated string.
unsafe fn path_arg(s: *const c_char, what: &str) -> Result<Option<PathBuf>, MobnetStatus> {
    if s.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(s)
        .to_str()
        .map(|s| Some(PathBuf::from(s)))
        .map_err(|_| fail(MobnetStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// Copy `text` NUL-terminated into `buf`. `needed` receives the full size
/// including the terminator. Does not touch the last error, so callers can
/// size a buffer for the message itself.
///
/// # Safety
/// `buf` is null or valid for `len` bytes; `needed` is null or writable.
unsafe fn copy_out(text: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> MobnetStatus {
    let size = text.len() + 1;
    if !needed.is_null() {
        *needed = size;
    }
    if buf.is_null() || len < size {
        return MobnetStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
    *buf.add(text.len()) = 0;
    MobnetStatus::Ok
}

/// Copy the calling thread's last error message into `buf`.
///
/// # Safety
/// `buf` is null or valid for `len` bytes; `needed` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn mobnet_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> MobnetStatus {
    let message = LAST_ERROR.with(|e| e.borrow().clone());
    copy_out(&message, buf, len, needed)
}

/// Load the years `first..=last` from `data_dir` using the schemas in
/// `schema_dir`. `geo_table` may be null. `all_participants` selects the
/// universe policy (0: institutions with special-needs flows).
///
/// # Safety
/// String arguments are null or NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mobnet_study_load(
    data_dir: *const c_char,
    schema_dir: *const c_char,
    first: i32,
    last: i32,
    geo_table: *const c_char,
    all_participants: bool,
    out: *mut *mut MobnetStudy,
) -> MobnetStatus {
    guard(|| {
        if out.is_null() {
            return fail(MobnetStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let (data, schema, geo) = match (
            path_arg(data_dir, "data_dir"),
            path_arg(schema_dir, "schema_dir"),
            path_arg(geo_table, "geo_table"),
        ) {
            (Ok(Some(d)), Ok(Some(s)), Ok(g)) => (d, s, g),
            (Err(status), _, _) | (_, Err(status), _) | (_, _, Err(status)) => return status,
            _ => return fail(MobnetStatus::NullPointer, "data_dir and schema_dir are required"),
        };
        if first > last {
            return fail(
                MobnetStatus::InvalidArgument,
                format!("empty year range {first}..={last}"),
            );
        }
        let dataset = match load_dataset(&data, &schema, &(first..=last)) {
            Ok(d) => d,
            Err(e) => return fail(MobnetStatus::Io, e.to_string()),
        };
        let geo = match geo.as_deref().map(GeoTable::load).transpose() {
            Ok(g) => g,
            Err(e) => return fail(MobnetStatus::Data, e.to_string()),
        };
        let policy = if all_participants {
            UniversePolicy::AllParticipants
        } else {
            UniversePolicy::SpecialNeeds
        };
        match Study::new(dataset, policy, geo, ConnectionSplit::StemClass) {
            Ok(study) => {
                *out = Box::into_raw(Box::new(MobnetStudy(study)));
                MobnetStatus::Ok
            }
            Err(e) => fail(MobnetStatus::Data, e.to_string()),
        }
    })
}

/// # Safety
/// `study` is null or a handle from [`mobnet_study_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mobnet_study_free(study: *mut MobnetStudy) {
    if !study.is_null() {
        drop(Box::from_raw(study));
    }
}

/// Network of `year`: special-needs flows when `special_needs` is true,
/// otherwise all study flows.
///
/// # Safety
/// `study` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mobnet_network_build(
    study: *const MobnetStudy,
    year: i32,
    special_needs: bool,
    out: *mut *mut MobnetNetwork,
) -> MobnetStatus {
    guard(|| {
        if study.is_null() || out.is_null() {
            return fail(MobnetStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let study = &(*study).0;
        let built = if special_needs {
            study.sn_network(year)
        } else {
            study.full_network(year)
        };
        match built {
            Ok(n) => {
                *out = Box::into_raw(Box::new(MobnetNetwork(n)));
                MobnetStatus::Ok
            }
            Err(e) => fail(MobnetStatus::Data, e.to_string()),
        }
    })
}

fn slice_of(gender: MobnetGender, stem: MobnetStem) -> CohortSlice {
    CohortSlice {
        gender: match gender {
            MobnetGender::All => None,
            MobnetGender::Female => Some(Gender::F),
            MobnetGender::Male => Some(Gender::M),
            MobnetGender::Unknown => Some(Gender::Unknown),
        },
        stem: match stem {
            MobnetStem::All => None,
            MobnetStem::Stem => Some(StemClass::Stem),
            MobnetStem::NonStem => Some(StemClass::NonStem),
        },
    }
}

/// New network keeping only the flows of one gender and/or STEM class.
///
/// # Safety
/// `network` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mobnet_network_subnetwork(
    network: *const MobnetNetwork,
    gender: MobnetGender,
    stem: MobnetStem,
    out: *mut *mut MobnetNetwork,
) -> MobnetStatus {
    guard(|| {
        if network.is_null() || out.is_null() {
            return fail(MobnetStatus::NullPointer, "null argument");
        }
        let sub = (*network).0.subnetwork(&slice_of(gender, stem));
        *out = Box::into_raw(Box::new(MobnetNetwork(sub)));
        MobnetStatus::Ok
    })
}

/// # Safety
/// `network` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mobnet_network_free(network: *mut MobnetNetwork) {
    if !network.is_null() {
        drop(Box::from_raw(network));
    }
}

/// Number of nodes (the universe size), or 0 for a null handle.
///
/// # Safety
/// `network` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mobnet_network_node_count(network: *const MobnetNetwork) -> usize {
    network.as_ref().map_or(0, |n| n.0.node_count())
}

/// Institution code of `node` copied NUL-terminated into `buf`.
///
/// # Safety
/// `network` is a live handle; `buf` is null or valid for `len` bytes;
/// `needed` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn mobnet_network_node_code(
    network: *const MobnetNetwork,
    node: usize,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> MobnetStatus {
    guard(|| {
        let Some(n) = network.as_ref() else {
            return fail(MobnetStatus::NullPointer, "network is null");
        };
        if node >= n.0.node_count() {
            return fail(MobnetStatus::InvalidArgument, format!("node {node} out of range"));
        }
        copy_out(n.0.node(node).code.as_str(), buf, len, needed)
    })
}

/// Node index of an institution code, or `InvalidArgument` if absent.
///
/// # Safety
/// `network` is a live handle; `code` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mobnet_network_node_index(
    network: *const MobnetNetwork,
    code: *const c_char,
    out: *mut usize,
) -> MobnetStatus {
    guard(|| {
        if network.is_null() || code.is_null() || out.is_null() {
            return fail(MobnetStatus::NullPointer, "null argument");
        }
        let Ok(text) = CStr::from_ptr(code).to_str() else {
            return fail(MobnetStatus::InvalidArgument, "code is not UTF-8");
        };
        let found = InstitutionCode::parse(text).ok().and_then(|c| (*network).0.node_id(&c));
        match found {
            Some(id) => {
                *out = id;
                MobnetStatus::Ok
            }
            None => fail(MobnetStatus::InvalidArgument, format!("{text} is not in the network")),
        }
    })
}

fn ratio_f64(r: Option<&num_rational::Ratio<u64>>) -> f64 {
    r.and_then(|r| r.to_f64()).unwrap_or(f64::NAN)
}

/// All summary statistics of `network`.
///
/// # Safety
/// `network` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mobnet_network_metrics(
    network: *const MobnetNetwork,
    out: *mut MobnetMetrics,
) -> MobnetStatus {
    guard(|| {
        if network.is_null() || out.is_null() {
            return fail(MobnetStatus::NullPointer, "null argument");
        }
        let r = MetricsReport::compute(&(*network).0, &CohortSlice::ALL, Default::default());
        let nan = |v: Option<f64>| v.unwrap_or(f64::NAN);
        *out = MobnetMetrics {
            universe: r.universe,
            active: r.active,
            sending: r.sending,
            receiving: r.receiving,
            partnerships: r.partnerships,
            active_connections: r.active_connections,
            isolates: r.isolates,
            density: ratio_f64(r.density.as_ref()),
            degree_centralization_all: ratio_f64(r.degree_centralization.all.as_ref()),
            degree_centralization_out: ratio_f64(r.degree_centralization.out.as_ref()),
            degree_centralization_in: ratio_f64(r.degree_centralization.inward.as_ref()),
            closeness_centralization_all: nan(r.closeness_centralization.all),
            closeness_centralization_out: nan(r.closeness_centralization.out),
            closeness_centralization_in: nan(r.closeness_centralization.inward),
            assortativity: nan(r.assortativity.value()),
            reciprocity: ratio_f64(r.reciprocity.as_ref()),
            strength: r.strength.total,
            strength_stem: r.strength.stem,
            strength_non_stem: r.strength.non_stem,
        };
        MobnetStatus::Ok
    })
}

/// Density as an exact fraction `numer / denom` in lowest terms.
///
/// # Safety
/// `network` is a live handle; `numer` and `denom` are writable.
#[no_mangle]
pub unsafe extern "C" fn mobnet_network_density(
    network: *const MobnetNetwork,
    numer: *mut u64,
    denom: *mut u64,
) -> MobnetStatus {
    guard(|| {
        if network.is_null() || numer.is_null() || denom.is_null() {
            return fail(MobnetStatus::NullPointer, "null argument");
        }
        match mobnet::metrics::density((*network).0.graph()) {
            Ok(d) => {
                *numer = *d.numer();
                *denom = *d.denom();
                MobnetStatus::Ok
            }
            Err(e) => fail(MobnetStatus::Undefined, e.to_string()),
        }
    })
}

/// Up to `k` nodes by degree (descending, ties by code) into `entries`,
/// which must hold `capacity` elements; `written` receives the count.
///
/// # Safety
/// `network` is a live handle; `entries` is valid for `capacity` elements;
/// `written` is writable.
#[no_mangle]
pub unsafe extern "C" fn mobnet_network_top_k(
    network: *const MobnetNetwork,
    direction: MobnetDirection,
    k: usize,
    entries: *mut MobnetRankEntry,
    capacity: usize,
    written: *mut usize,
) -> MobnetStatus {
    guard(|| {
        if network.is_null() || written.is_null() || (entries.is_null() && capacity > 0) {
            return fail(MobnetStatus::NullPointer, "null argument");
        }
        let net = &(*network).0;
        let dir = match direction {
            MobnetDirection::Out => Direction::Out,
            MobnetDirection::In => Direction::In,
        };
        let ranked = match top_k(net, dir, k) {
            Ok(r) => r,
            Err(e) => return fail(MobnetStatus::InvalidArgument, e.to_string()),
        };
        *written = 0;
        if ranked.len() > capacity {
            return fail(
                MobnetStatus::BufferTooSmall,
                format!("{} entries, capacity {capacity}", ranked.len()),
            );
        }
        for (i, e) in ranked.iter().enumerate() {
            let node = net.node_id(&e.institution).expect("ranked node is in the network");
            *entries.add(i) = MobnetRankEntry { node, degree: e.degree };
        }
        *written = ranked.len();
        MobnetStatus::Ok
    })
}

/// Bounded inclusiveness `(I - 1) / (I + 1)`; negative or NaN `index` is
/// `InvalidArgument`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mobnet_bound_index(index: f64, out: *mut f64) -> MobnetStatus {
    guard(|| {
        if out.is_null() {
            return fail(MobnetStatus::NullPointer, "out is null");
        }
        match bound_f64(index) {
            Ok(b) => {
                *out = b;
                MobnetStatus::Ok
            }
            Err(e) => fail(MobnetStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Inclusiveness index from incoming counts: special-needs at the
/// university, special-needs in its country, all at the university, all in
/// its country. Writes `I` and its bounded form.
///
/// # Safety
/// `index` and `bounded` are writable.
#[no_mangle]
pub unsafe extern "C" fn mobnet_inclusiveness_index(
    sn_university: u64,
    sn_country: u64,
    university: u64,
    country: u64,
    index: *mut f64,
    bounded: *mut f64,
) -> MobnetStatus {
    guard(|| {
        if index.is_null() || bounded.is_null() {
            return fail(MobnetStatus::NullPointer, "null argument");
        }
        let counts = IncomingCounts {
            sn_university,
            sn_country,
            university,
            country,
        };
        let code = InstitutionCode::parse("FFI").expect("valid code");
        let cc = CountryCode::parse("XX").expect("valid code");
        let raw = match raw_index(counts, &code, cc, 0) {
            Ok(i) => i,
            Err(e) => return fail(MobnetStatus::Undefined, e.to_string()),
        };
        let b = mobnet::inclusiveness::bound(&raw).expect("index is non-negative");
        *index = raw.to_f64().unwrap_or(f64::NAN);
        *bounded = b.to_f64().unwrap_or(f64::NAN);
        MobnetStatus::Ok
    })
}
