// Every example is compiled into this test and run once.

#[path = "../examples/baseline_compare.rs"]
mod baseline_compare;
#[path = "../examples/battery_plan.rs"]
mod battery_plan;
#[path = "../examples/generate_corpus.rs"]
mod generate_corpus;
#[path = "../examples/oracle_lp.rs"]
mod oracle_lp;
#[path = "../examples/parse_instance.rs"]
mod parse_instance;
#[path = "../examples/recourse.rs"]
mod recourse;
#[path = "../examples/worked_example.rs"]
mod worked_example;

#[test]
fn examples_run() {
    worked_example::main();
    oracle_lp::main();
    recourse::main();
    parse_instance::main().unwrap();
    generate_corpus::main().unwrap();
    battery_plan::main().unwrap();
    baseline_compare::main().unwrap();
}
