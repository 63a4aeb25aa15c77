use superbi_core::kernel::check_action_identities;
use superbi_core::Model;

#[test]
fn action_identities_hold_symbolically() {
    let model = Model::symbolic();
    let report = check_action_identities(&model, 8);
    for c in report.failures() {
        eprintln!("{} [{}]: {}", c.id, c.anchor, c.residual);
    }
    assert_eq!(report.len(), 12);
    assert!(report.all_passed());
}
