use loopspace_cli::golden;

const PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/golden/corpus.txt");

/// Byte equality of every case; `LOOPSPACE_BLESS=1` rewrites the corpus
/// from its commands instead.
#[test]
fn corpus_reproduces() {
    let corpus = std::fs::read_to_string(PATH).unwrap();
    if std::env::var_os("LOOPSPACE_BLESS").is_some() {
        let rendered = golden::render(&golden::cases(&corpus)).unwrap();
        std::fs::write(PATH, rendered).unwrap();
        return;
    }
    assert_eq!(corpus, golden::CORPUS, "rebuild after editing the corpus");
    match golden::check(&corpus) {
        Ok(n) => assert!(n > 0),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn every_subcommand_is_covered() {
    let cases = golden::cases(golden::CORPUS);
    for sub in ["factor", "classify", "census", "family", "residue", "thirdkind", "covers", "selftest"] {
        assert!(
            cases.iter().any(|c| c.command.split_whitespace().next() == Some(sub)),
            "no golden case for {sub}"
        );
    }
}

#[test]
fn repeated_runs_are_identical() {
    for case in golden::cases(golden::CORPUS).iter().take(12) {
        assert_eq!(golden::render_case(case).unwrap(), golden::render_case(case).unwrap());
    }
}
