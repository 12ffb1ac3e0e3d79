use std::ffi::{CStr, CString};
use std::ptr;

use ctsp_ffi::*;

fn grid_text(n: usize) -> CString {
    let mut s = format!(
        "NAME: grid{n}\nTYPE: TSP\nDIMENSION: {n}\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n"
    );
    for k in 0..n {
        s += &format!("{} {} {}\n", k + 1, (k * 37 % 23) * 10, (k * 11 % 17) * 10);
    }
    s += "EOF\n";
    CString::new(s).unwrap()
}

fn parse(n: usize) -> *mut CtspInstance {
    let mut inst = ptr::null_mut();
    assert_eq!(
        unsafe { ctsp_instance_parse(grid_text(n).as_ptr(), &mut inst) },
        CtspStatus::Ok
    );
    assert!(!inst.is_null());
    inst
}

fn order_of(sol: *const CtspSolution) -> Vec<usize> {
    let len = unsafe { ctsp_solution_len(sol) };
    let mut buf = vec![usize::MAX; len];
    assert_eq!(
        unsafe { ctsp_solution_order(sol, buf.as_mut_ptr(), len) },
        CtspStatus::Ok
    );
    buf
}

fn last_error() -> String {
    let p = ctsp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn solve_round_trip() {
    unsafe {
        let base = parse(12);
        assert_eq!(ctsp_instance_size(base), 12);
        let mut inst = ptr::null_mut();
        assert_eq!(
            ctsp_instance_regroup(base, 3, true, 4, &mut inst),
            CtspStatus::Ok
        );
        assert_eq!(ctsp_instance_set_relax(inst, 1), CtspStatus::Ok);
        assert_eq!(ctsp_instance_priority(inst, 0), 0);
        assert!((1..12).all(|v| (1..=3).contains(&ctsp_instance_priority(inst, v))));

        let mut exact = ptr::null_mut();
        assert_eq!(
            ctsp_solve_exact(inst, 1_000_000, &mut exact),
            CtspStatus::Ok
        );
        let mut heur = ptr::null_mut();
        assert_eq!(ctsp_solve(inst, false, 9, &mut heur), CtspStatus::Ok);
        assert!(ctsp_solution_cost(heur) >= ctsp_solution_cost(exact));

        for sol in [exact, heur] {
            let order = order_of(sol);
            assert_eq!(order[0], 0);
            let mut sorted = order.clone();
            sorted.sort();
            assert_eq!(sorted, (0..12).collect::<Vec<_>>());
            let mut feasible = false;
            assert_eq!(
                ctsp_check_order(inst, order.as_ptr(), order.len(), &mut feasible),
                CtspStatus::Ok
            );
            assert!(feasible);
        }

        ctsp_solution_free(exact);
        ctsp_solution_free(heur);
        ctsp_instance_free(inst);
        ctsp_instance_free(base);
    }
}

#[test]
fn seeded_solves_repeat() {
    unsafe {
        let base = parse(20);
        let mut inst = ptr::null_mut();
        assert_eq!(
            ctsp_instance_regroup(base, 4, false, 1, &mut inst),
            CtspStatus::Ok
        );
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(ctsp_solve(inst, false, 3, &mut a), CtspStatus::Ok);
        assert_eq!(ctsp_solve(inst, false, 3, &mut b), CtspStatus::Ok);
        assert_eq!(order_of(a), order_of(b));
        ctsp_solution_free(a);
        ctsp_solution_free(b);
        ctsp_instance_free(inst);
        ctsp_instance_free(base);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut inst = ptr::null_mut();
        let bad = CString::new(
            "NAME: x\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n",
        )
        .unwrap();
        let status = ctsp_instance_parse(bad.as_ptr(), &mut inst);
        assert!(matches!(
            status,
            CtspStatus::Parse | CtspStatus::InvalidInstance
        ));
        assert!(inst.is_null());
        assert!(!last_error().is_empty());

        let missing = CString::new("/nonexistent/file.tsp").unwrap();
        assert_eq!(
            ctsp_instance_load(missing.as_ptr(), &mut inst),
            CtspStatus::Io
        );

        let base = parse(10);
        let mut out = ptr::null_mut();
        assert_eq!(
            ctsp_instance_regroup(base, 0, true, 0, &mut out),
            CtspStatus::InvalidArgument
        );
        let mut sol = ptr::null_mut();
        assert_eq!(ctsp_solve_exact(base, 5, &mut sol), CtspStatus::TooLarge);
        assert!(sol.is_null());

        let mut feasible = true;
        let dup = [0usize, 1, 1, 2, 3, 4, 5, 6, 7, 8];
        assert_eq!(
            ctsp_check_order(base, dup.as_ptr(), dup.len(), &mut feasible),
            CtspStatus::InvalidRoute
        );

        assert_eq!(ctsp_solve_exact(base, 1_000_000, &mut sol), CtspStatus::Ok);
        let mut small = [0usize; 3];
        assert_eq!(
            ctsp_solution_order(sol, small.as_mut_ptr(), small.len()),
            CtspStatus::InvalidArgument
        );
        assert!(last_error().contains("buffer"));
        ctsp_solution_free(sol);
        ctsp_instance_free(base);
    }
}

#[test]
fn null_handles() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(
            ctsp_instance_parse(ptr::null(), &mut inst),
            CtspStatus::NullPointer
        );
        assert_eq!(
            ctsp_instance_parse(grid_text(5).as_ptr(), ptr::null_mut()),
            CtspStatus::NullPointer
        );
        let mut sol = ptr::null_mut();
        assert_eq!(
            ctsp_solve(ptr::null(), false, 0, &mut sol),
            CtspStatus::NullPointer
        );
        assert_eq!(
            ctsp_instance_set_relax(ptr::null_mut(), 1),
            CtspStatus::NullPointer
        );
        assert_eq!(ctsp_instance_size(ptr::null()), 0);
        assert_eq!(ctsp_solution_cost(ptr::null()), 0);
        assert_eq!(ctsp_solution_len(ptr::null()), 0);
        ctsp_instance_free(ptr::null_mut());
        ctsp_solution_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ctsp.h")).unwrap();
    assert!(header.contains("#ifndef CTSP_H"));
    for name in [
        "ctsp_last_error",
        "ctsp_instance_parse",
        "ctsp_instance_load",
        "ctsp_instance_free",
        "ctsp_instance_size",
        "ctsp_instance_priority",
        "ctsp_instance_regroup",
        "ctsp_instance_set_relax",
        "ctsp_solve",
        "ctsp_solve_exact",
        "ctsp_solution_free",
        "ctsp_solution_cost",
        "ctsp_solution_len",
        "ctsp_solution_order",
        "ctsp_check_order",
    ] {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    for code in [
        "CTSP_STATUS_OK = 0",
        "CTSP_STATUS_NULL_POINTER = 1",
        "CTSP_STATUS_PANIC = 8",
    ] {
        assert!(header.contains(code));
    }
    assert!(header.contains("typedef struct CtspInstance CtspInstance;"));
}
