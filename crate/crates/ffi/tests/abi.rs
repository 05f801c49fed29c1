use std::ffi::{CStr, CString};
use std::ptr;

use nchroma_ffi::*;

fn star(leaves: usize) -> *mut NcGraph {
    let edges: Vec<usize> = (1..=leaves).flat_map(|v| [0, v]).collect();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { nc_graph_new(leaves + 1, edges.as_ptr(), leaves, &mut g) },
        NcStatus::Ok
    );
    g
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(nc_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn build_and_query() {
    let g = star(5);
    unsafe {
        assert_eq!(nc_graph_order(g), 6);
        assert_eq!(nc_graph_edge_count(g), 5);
        nc_graph_free(g);
        nc_graph_free(ptr::null_mut());
        assert_eq!(nc_graph_order(ptr::null()), 0);
    }
}

#[test]
fn bad_graphs_report_codes() {
    let mut g = ptr::null_mut();
    let looped = [0usize, 0];
    assert_eq!(
        unsafe { nc_graph_new(2, looped.as_ptr(), 1, &mut g) },
        NcStatus::InvalidGraph
    );
    assert!(g.is_null());
    assert!(last_error().contains("loop"), "{}", last_error());
    assert_eq!(
        unsafe { nc_graph_new(2, ptr::null(), 1, &mut g) },
        NcStatus::NullPointer
    );

    let text = CString::new("3 2\n0 1\n1 x\n").unwrap();
    assert_eq!(
        unsafe { nc_graph_from_text(text.as_ptr(), &mut g) },
        NcStatus::Parse
    );
    assert!(last_error().contains("line 3"), "{}", last_error());
}

#[test]
fn solve_and_verify() {
    let g = star(5);
    let mut res = NcSolveResult {
        value: 0,
        nodes: 0,
        complete: false,
    };
    let mut witness = [0u32; 6];
    unsafe {
        assert_eq!(
            nc_solve(g, 3, 0, false, &mut res, witness.as_mut_ptr()),
            NcStatus::Ok
        );
        assert_eq!((res.value, res.complete), (4, true));
        let mut violations = 99;
        assert_eq!(
            nc_verify(g, witness.as_ptr(), 6, 3, &mut violations),
            NcStatus::Ok
        );
        assert_eq!(violations, 0);

        assert_eq!(nc_oracle(g, 4, &mut res, ptr::null_mut()), NcStatus::Ok);
        assert_eq!(res.value, 5);

        let rainbow = [1u32, 2, 3, 4, 5, 6];
        assert_eq!(
            nc_verify(g, rainbow.as_ptr(), 6, 3, &mut violations),
            NcStatus::InvalidColoring
        );
        assert_eq!(violations, 1);
        nc_graph_free(g);
    }
}

#[test]
fn oracle_cap_and_budget() {
    let n = 14;
    let edges: Vec<usize> = (0..n).flat_map(|v| [v, (v + 1) % n]).collect();
    let mut g = ptr::null_mut();
    let mut res = NcSolveResult {
        value: 0,
        nodes: 0,
        complete: false,
    };
    unsafe {
        assert_eq!(nc_graph_new(n, edges.as_ptr(), n, &mut g), NcStatus::Ok);
        assert_eq!(
            nc_oracle(g, 3, &mut res, ptr::null_mut()),
            NcStatus::OracleCapExceeded
        );
        assert_eq!(
            nc_solve(g, 1, 5, false, &mut res, ptr::null_mut()),
            NcStatus::Incomplete
        );
        assert!(!res.complete);
        nc_graph_free(g);
    }
}

#[test]
fn reports_as_strings() {
    let g = star(5);
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(nc_bounds_json(g, 3, &mut s), NcStatus::Ok);
        let json: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        assert_eq!(json["n"], 6);
        nc_string_free(s);

        let label = CString::new("star:6").unwrap();
        assert_eq!(nc_audit_csv(g, 4, label.as_ptr(), &mut s), NcStatus::Ok);
        let csv = CStr::from_ptr(s).to_str().unwrap().to_owned();
        nc_string_free(s);
        assert_eq!(
            csv,
            "claim,graph,n,i,claimed,oracle,direction\ntree-ti-value,star:6,6,4,4,5,claimed-equality-fails\n"
        );
        nc_graph_free(g);
    }
}

#[test]
fn disconnected_input_is_rejected_by_bounds() {
    let edges = [0usize, 1, 2, 3];
    let mut g = ptr::null_mut();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(nc_graph_new(4, edges.as_ptr(), 2, &mut g), NcStatus::Ok);
        assert_eq!(nc_bounds_json(g, 3, &mut s), NcStatus::Disconnected);
        assert!(s.is_null());
        nc_graph_free(g);
    }
}

#[test]
fn status_strings() {
    let s = unsafe { CStr::from_ptr(nc_status_str(NcStatus::Incomplete)) };
    assert_eq!(s.to_str().unwrap(), "search budget exhausted");
}
