use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use rsekit_ffi::*;

const TABLE2: &str = r#"{"m":3,"n":3,
  "u_l":[[1,0.25,0],[0.5,0.5,0],[0.25,0.25,0.25]],
  "u_f":[[0.5,0.5,0],[0.5,0.5,0],[0.5,0.5,0.5]]}"#;

fn load(arith: RsekitArith) -> *mut RsekitGame {
    let text = CString::new(TABLE2).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { rsekit_game_from_json(text.as_ptr(), arith, &mut g) }, RsekitStatus::Ok);
    g
}

fn last_error() -> String {
    let p = rsekit_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn solve_table2_both_ariths() {
    for arith in [RsekitArith::Float, RsekitArith::Exact] {
        let g = load(arith);
        let (mut m, mut n) = (0, 0);
        assert_eq!(unsafe { rsekit_game_dims(g, &mut m, &mut n) }, RsekitStatus::Ok);
        assert_eq!((m, n), (3, 3));

        let mut sol = ptr::null_mut();
        assert_eq!(unsafe { rsekit_solve(g, RsekitMethod::Exact, 0.25, 0.0, &mut sol) }, RsekitStatus::Ok);
        assert!((unsafe { rsekit_solution_value(sol) } - 0.5).abs() < 1e-12);
        let mut x = [0.0; 3];
        let mut len = 0;
        assert_eq!(unsafe { rsekit_solution_strategy(sol, x.as_mut_ptr(), 3, &mut len) }, RsekitStatus::Ok);
        assert_eq!(len, 3);
        assert!((x[1] - 1.0).abs() < 1e-12);

        let json = unsafe { rsekit_solution_json(sol) };
        let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["method"], "exact");
        unsafe {
            rsekit_string_free(json);
            rsekit_solution_free(sol);
        }

        for (method, want) in [(RsekitMethod::Sse, 1.0), (RsekitMethod::Maximin, 0.25)] {
            let mut sol = ptr::null_mut();
            assert_eq!(unsafe { rsekit_solve(g, method, 0.25, 0.0, &mut sol) }, RsekitStatus::Ok);
            assert!((unsafe { rsekit_solution_value(sol) } - want).abs() < 1e-12);
            unsafe { rsekit_solution_free(sol) };
        }
        unsafe { rsekit_game_free(g) };
    }
}

#[test]
fn evaluate_and_br() {
    let g = load(RsekitArith::Exact);
    let x = [0.0, 1.0, 0.0];
    let (mut v, mut j) = (0.0, 0);
    assert_eq!(unsafe { rsekit_evaluate(g, x.as_ptr(), 3, 0.25, &mut v, &mut j) }, RsekitStatus::Ok);
    assert_eq!((v, j), (0.5, 0));

    let mut buf = [0usize; 1];
    let mut len = 0;
    let st = unsafe { rsekit_br_delta(g, x.as_ptr(), 3, 0.25, buf.as_mut_ptr(), 1, &mut len) };
    assert_eq!(st, RsekitStatus::BufferTooSmall);
    assert_eq!(len, 2);
    let mut buf = [0usize; 3];
    assert_eq!(unsafe { rsekit_br_delta(g, x.as_ptr(), 3, 0.25, buf.as_mut_ptr(), 3, &mut len) }, RsekitStatus::Ok);
    assert_eq!(&buf[..len], &[0, 1]);
    unsafe { rsekit_game_free(g) };
}

#[test]
fn errors_map_to_status_codes() {
    let g = load(RsekitArith::Float);
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { rsekit_solve(g, RsekitMethod::GapApprox, 0.6, 0.0, &mut sol) }, RsekitStatus::GapTooSmall);
    assert!(sol.is_null());
    assert!(last_error().contains("gap"));

    let (mut gap, mut inf) = (1.0, true);
    assert_eq!(unsafe { rsekit_gap(g, &mut gap, &mut inf) }, RsekitStatus::Ok);
    assert!(!inf);
    assert_eq!(gap, 0.0);

    let x = [0.5, 0.6, 0.0];
    let (mut v, mut j) = (0.0, 0);
    assert_eq!(unsafe { rsekit_evaluate(g, x.as_ptr(), 3, 0.1, &mut v, &mut j) }, RsekitStatus::InvalidArgument);
    assert_eq!(unsafe { rsekit_evaluate(ptr::null(), x.as_ptr(), 3, 0.1, &mut v, &mut j) }, RsekitStatus::NullPointer);
    unsafe { rsekit_game_free(g) };

    let bad = CString::new("{").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { rsekit_game_from_json(bad.as_ptr(), RsekitArith::Float, &mut g) }, RsekitStatus::Parse);
    assert!(g.is_null());
}

#[test]
fn arrays_are_normalized() {
    let ul = [2.0, 0.0, 1.0, 1.0];
    let uf = [0.0, 4.0, 4.0, 0.0];
    let mut g = ptr::null_mut();
    let st = unsafe { rsekit_game_new(2, 2, ul.as_ptr(), uf.as_ptr(), RsekitArith::Exact, &mut g) };
    assert_eq!(st, RsekitStatus::Ok);
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { rsekit_solve(g, RsekitMethod::Sse, 0.0, 0.0, &mut sol) }, RsekitStatus::Ok);
    assert_eq!(unsafe { rsekit_solution_value(sol) }, 0.75);
    unsafe {
        rsekit_solution_free(sol);
        rsekit_game_free(g);
    }
    let mut g = ptr::null_mut();
    let nan = [f64::NAN; 4];
    let st = unsafe { rsekit_game_new(2, 2, nan.as_ptr(), uf.as_ptr(), RsekitArith::Float, &mut g) };
    assert_eq!(st, RsekitStatus::InvalidGame);
}

#[test]
fn header_compiles_as_c() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/rsekit.h");
    assert!(header.exists());
    let Ok(cc) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(cc.status.success());
    let src = std::env::temp_dir().join(format!("rsekit_ffi_{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"rsekit.h\"\nint main(void) {\n  RsekitGame *g = NULL;\n  RsekitStatus s = rsekit_game_from_json(\"{}\", RSEKIT_ARITH_FLOAT, &g);\n  return s == RSEKIT_STATUS_OK;\n}\n",
    )
    .unwrap();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&src)
        .output()
        .unwrap();
    let _ = std::fs::remove_file(&src);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
