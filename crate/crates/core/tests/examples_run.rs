macro_rules! example {
    ($module:ident, $file:literal, $test:ident) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(four_qutrit, "four_qutrit_contradiction.rs", four_qutrit_contradiction_runs);
example!(three_qubit, "classic_three_qubit.rs", classic_three_qubit_runs);
example!(overlaps, "observable_overlaps.rs", observable_overlaps_run);
example!(divisor, "divisor_criterion.rs", divisor_criterion_runs);
example!(sweep, "sweep_table.rs", sweep_table_runs);
example!(genuine, "genuineness.rs", genuineness_runs);
example!(json, "json_report.rs", json_report_runs);
