use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use mobnet_ffi::*;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn cstr(p: &Path) -> CString {
    CString::new(p.to_str().unwrap()).unwrap()
}

fn last_error() -> String {
    let mut needed = 0usize;
    unsafe {
        assert_eq!(
            mobnet_last_error(ptr::null_mut(), 0, &mut needed),
            MobnetStatus::BufferTooSmall
        );
        let mut buf = vec![0 as c_char; needed];
        assert_eq!(
            mobnet_last_error(buf.as_mut_ptr(), buf.len(), ptr::null_mut()),
            MobnetStatus::Ok
        );
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

struct Study(*mut MobnetStudy);

impl Study {
    fn load() -> Self {
        let f = fixtures();
        let (data, schemas, geo) = (
            cstr(&f.join("data")),
            cstr(&f.join("schemas")),
            cstr(&f.join("geo.csv")),
        );
        let mut out = ptr::null_mut();
        let status = unsafe {
            mobnet_study_load(
                data.as_ptr(),
                schemas.as_ptr(),
                2008,
                2013,
                geo.as_ptr(),
                false,
                &mut out,
            )
        };
        assert_eq!(status, MobnetStatus::Ok, "{}", last_error());
        Study(out)
    }

    fn network(&self, year: i32) -> Net {
        let mut out = ptr::null_mut();
        let status = unsafe { mobnet_network_build(self.0, year, true, &mut out) };
        assert_eq!(status, MobnetStatus::Ok, "{}", last_error());
        Net(out)
    }
}

impl Drop for Study {
    fn drop(&mut self) {
        unsafe { mobnet_study_free(self.0) }
    }
}

struct Net(*mut MobnetNetwork);

impl Drop for Net {
    fn drop(&mut self) {
        unsafe { mobnet_network_free(self.0) }
    }
}

impl Net {
    fn code(&self, node: usize) -> String {
        let mut buf = [0 as c_char; 32];
        let status = unsafe { mobnet_network_node_code(self.0, node, buf.as_mut_ptr(), buf.len(), ptr::null_mut()) };
        assert_eq!(status, MobnetStatus::Ok);
        unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
    }
}

#[test]
fn metrics_of_the_2008_network() {
    let study = Study::load();
    let net = study.network(2008);
    let mut m = MobnetMetrics::default();
    assert_eq!(unsafe { mobnet_network_metrics(net.0, &mut m) }, MobnetStatus::Ok);
    assert_eq!((m.universe, m.active, m.isolates), (7, 5, 2));
    assert_eq!((m.strength, m.strength_stem, m.strength_non_stem), (6, 2, 4));
    assert_eq!(m.degree_centralization_out, 0.25);
    assert!((m.density - 5.0 / 42.0).abs() < 1e-15);

    let (mut numer, mut denom) = (0u64, 0u64);
    assert_eq!(
        unsafe { mobnet_network_density(net.0, &mut numer, &mut denom) },
        MobnetStatus::Ok
    );
    assert_eq!((numer, denom), (5, 42));
    assert_eq!(unsafe { mobnet_network_node_count(net.0) }, 7);
}

#[test]
fn top_k_and_node_lookup() {
    let study = Study::load();
    let net = study.network(2013);
    let mut entries = [MobnetRankEntry { node: 0, degree: 0 }; 8];
    let mut written = 0;
    let status = unsafe {
        mobnet_network_top_k(
            net.0,
            MobnetDirection::In,
            3,
            entries.as_mut_ptr(),
            entries.len(),
            &mut written,
        )
    };
    assert_eq!(status, MobnetStatus::Ok);
    let got: Vec<(String, usize)> = entries[..written]
        .iter()
        .map(|e| (net.code(e.node), e.degree))
        .collect();
    assert_eq!(
        got,
        [
            ("E GRANADA01".to_string(), 5),
            ("I ROMA01".to_string(), 3),
            ("E MADRID01".to_string(), 1)
        ]
    );

    let mut small = [MobnetRankEntry { node: 0, degree: 0 }; 1];
    let status = unsafe {
        mobnet_network_top_k(
            net.0,
            MobnetDirection::In,
            3,
            small.as_mut_ptr(),
            small.len(),
            &mut written,
        )
    };
    assert_eq!(status, MobnetStatus::BufferTooSmall);
    assert_eq!(written, 0);

    let code = CString::new("I ROMA01").unwrap();
    let mut index = usize::MAX;
    assert_eq!(
        unsafe { mobnet_network_node_index(net.0, code.as_ptr(), &mut index) },
        MobnetStatus::Ok
    );
    assert_eq!(net.code(index), "I ROMA01");
    let missing = CString::new("Z NOWHERE01").unwrap();
    assert_eq!(
        unsafe { mobnet_network_node_index(net.0, missing.as_ptr(), &mut index) },
        MobnetStatus::InvalidArgument
    );
    assert!(last_error().contains("Z NOWHERE01"));
}

#[test]
fn subnetwork_by_gender_and_stem() {
    let study = Study::load();
    let net = study.network(2013);
    let mut female = ptr::null_mut();
    assert_eq!(
        unsafe { mobnet_network_subnetwork(net.0, MobnetGender::Female, MobnetStem::All, &mut female) },
        MobnetStatus::Ok
    );
    let female = Net(female);
    let mut m = MobnetMetrics::default();
    assert_eq!(unsafe { mobnet_network_metrics(female.0, &mut m) }, MobnetStatus::Ok);
    assert_eq!(m.active_connections, 6);
    assert_eq!(m.universe, 7);
}

#[test]
fn undefined_metrics_are_nan() {
    let study = Study::load();
    let net = study.network(2009);
    let mut empty = ptr::null_mut();
    assert_eq!(
        unsafe { mobnet_network_subnetwork(net.0, MobnetGender::Female, MobnetStem::Stem, &mut empty) },
        MobnetStatus::Ok
    );
    let empty = Net(empty);
    let mut m = MobnetMetrics::default();
    assert_eq!(unsafe { mobnet_network_metrics(empty.0, &mut m) }, MobnetStatus::Ok);
    assert_eq!((m.active, m.strength, m.density), (0, 0, 0.0));
    assert!(m.assortativity.is_nan() && m.reciprocity.is_nan());
}

#[test]
fn errors_are_reported_through_status_and_message() {
    let mut study = ptr::null_mut();
    let schemas = cstr(&fixtures().join("schemas"));
    let status = unsafe {
        mobnet_study_load(
            ptr::null(),
            schemas.as_ptr(),
            2008,
            2013,
            ptr::null(),
            false,
            &mut study,
        )
    };
    assert_eq!(status, MobnetStatus::NullPointer);
    assert!(study.is_null());

    let data = cstr(&fixtures().join("data"));
    let status = unsafe {
        mobnet_study_load(
            data.as_ptr(),
            schemas.as_ptr(),
            2013,
            2008,
            ptr::null(),
            false,
            &mut study,
        )
    };
    assert_eq!(status, MobnetStatus::InvalidArgument);
    assert!(last_error().contains("2013"));

    let s = Study::load();
    let mut net = ptr::null_mut();
    assert_eq!(
        unsafe { mobnet_network_build(s.0, 2020, true, &mut net) },
        MobnetStatus::Data
    );
    assert!(net.is_null());
    assert!(last_error().contains("2020"));

    assert_eq!(
        unsafe { mobnet_network_metrics(ptr::null(), ptr::null_mut()) },
        MobnetStatus::NullPointer
    );
    unsafe {
        mobnet_study_free(ptr::null_mut());
        mobnet_network_free(ptr::null_mut());
    }
}

#[test]
fn inclusiveness_helpers() {
    let (mut index, mut bounded) = (0.0, 0.0);
    // 4 of the country's 4 special-needs arrivals, 7 of its 11 arrivals.
    assert_eq!(
        unsafe { mobnet_inclusiveness_index(4, 4, 7, 11, &mut index, &mut bounded) },
        MobnetStatus::Ok
    );
    assert!((index - 11.0 / 7.0).abs() < 1e-15);
    assert!((bounded - 2.0 / 9.0).abs() < 1e-15);
    assert_eq!(
        unsafe { mobnet_inclusiveness_index(0, 0, 7, 11, &mut index, &mut bounded) },
        MobnetStatus::Undefined
    );

    let mut out = 0.0;
    assert_eq!(unsafe { mobnet_bound_index(3.0, &mut out) }, MobnetStatus::Ok);
    assert_eq!(out, 0.5);
    assert_eq!(
        unsafe { mobnet_bound_index(-1.0, &mut out) },
        MobnetStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { mobnet_bound_index(f64::NAN, &mut out) },
        MobnetStatus::InvalidArgument
    );
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let header = include.join("mobnet.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "mobnet_study_load",
        "mobnet_network_top_k",
        "mobnet_last_error",
        "MOBNET_STATUS_OK",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile_dir();
    let source = dir.join("use.c");
    std::fs::write(
        &source,
        "#include \"mobnet.h\"\n\
         int main(void) {\n\
           MobnetStudy *s = 0; MobnetNetwork *n = 0; MobnetMetrics m; size_t w = 0;\n\
           MobnetRankEntry e[4];\n\
           if (mobnet_study_load(\"d\", \"s\", 2008, 2013, 0, false, &s) != MOBNET_STATUS_OK) return 1;\n\
           mobnet_network_build(s, 2008, true, &n);\n\
           mobnet_network_metrics(n, &m);\n\
           mobnet_network_top_k(n, MOBNET_DIRECTION_IN, 3, e, 4, &w);\n\
           mobnet_network_free(n); mobnet_study_free(s);\n\
           return (int)m.active;\n\
         }\n",
    )
    .unwrap();
    for (compiler, extra) in [("cc", vec!["-std=c99"]), ("c++", vec!["-x", "c++"])] {
        let Ok(out) = Command::new(compiler)
            .args(&extra)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
            .arg(&include)
            .arg(&source)
            .output()
        else {
            eprintln!("{compiler} not available; header check skipped");
            continue;
        };
        assert!(
            out.status.success(),
            "{compiler}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

fn tempfile_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("mobnet-ffi-header");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
