use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(code: &std::ffi::CStr) {
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(bruhatkit_py::bruhatkit_py)(py);
        let globals = PyDict::new(py);
        globals.set_item("bk", module).unwrap();
        if let Err(e) = py.run(code, Some(&globals), None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn permutations_and_intervals() {
    run(c"
P = bk.Permutation
assert str(P('3412')) == '3412'
assert P([3, 4, 1, 2]) == P('3,4,1,2')
assert P('4231').length() == 5
assert P('1234').right_mul(1, 2) == P('2134')
assert P.identity(4).rank() == 0
assert bk.bruhat_leq(P('1234'), P('3412'))
assert not bk.bruhat_leq(P('3412'), P('4231'))
i = bk.Interval(P('1234'), P('3412'))
assert i.atom_labels() == [(1, 2), (2, 3), (3, 4)]
assert i.coatom_labels() == [(1, 3), (1, 4), (2, 3), (2, 4)]
assert i.components() == [[1, 2, 3, 4]]
assert P('3412').word == [3, 4, 1, 2]
r = i.gap_bound_report()
assert r['gap'] == 1 and r['coatom_bound'] == 4
assert '\"1\" -- \"3\"' in i.graph_dot('coatom')
try:
    bk.Interval(P('4231'), P('3412'))
    raise AssertionError('expected ValueError')
except ValueError:
    pass
");
}

#[test]
fn extremal_and_scan() {
    run(c"
assert bk.f(7) == 6 and bk.f_delta(5) == 2
assert bk.max_coatoms(5) == 6 and bk.theorem_a_value(4) == 1
assert [str(v) for v in bk.opt_top_permutations(4)] == ['3412', '4231']
s = bk.scan_max_gap(4, jobs=2)
assert s['max_gap'] == 1
assert s['maximizing_intervals'][0] == ['1234', '3412']
assert bk.verify(4, 'b')['passed']
assert bk.verify(6, 'p410', sample=100, seed=2)['passed']
try:
    bk.verify(3, 'b')
    raise AssertionError('expected ValueError')
except ValueError:
    pass
");
}
