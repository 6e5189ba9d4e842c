import os

from eventnouns.cli import main

TINY_CORPUS = (
    "during\tduring\tADP\nthe\tthe\tDET\nwar\twar\tNOUN\n\n"
    "the\tthe\tDET\nwar\twar\tNOUN\nhappened\thappen\tVERB\n\n"
    "a\ta\tDET\nmap\tmap\tNOUN\n\n"
    "the\tthe\tDET\nmap\tmap\tNOUN\nof\tof\tADP\nthem\tthey\tPRON\n"
)


def run(argv):
    try:
        return main(argv)
    except SystemExit as exc:  # argparse usage errors
        return exc.code


def write_corpus(tmp_path, text=TINY_CORPUS, name="corpus.tsv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def write_gold(tmp_path, rows, name="gold.csv"):
    path = tmp_path / name
    path.write_text("lemma,label\n" + "".join(f"{l},{lab}\n" for l, lab in rows),
                    encoding="utf-8")
    return str(path)


def test_extract_with_builtin_gold(tmp_path, capsys):
    corpus = write_corpus(tmp_path)
    out = str(tmp_path / "dataset.csv")
    assert run(["extract", "--lang", "EN", "--corpus", corpus,
                "--builtin-gold", "--out", out]) == 0
    captured = capsys.readouterr().out
    assert "lemmas: 167" in captured
    assert "nonzero vectors: 2" in captured  # war and map
    with open(out) as fh:
        assert sum(1 for _ in fh) == 168  # header + one row per gold lemma


def test_extract_missing_corpus_is_usage_error(tmp_path, capsys):
    missing = str(tmp_path / "nope.tsv")
    code = run(["extract", "--corpus", missing, "--builtin-gold",
                "--out", str(tmp_path / "d.csv")])
    assert code == 2
    assert "nope.tsv" in capsys.readouterr().err


def test_extract_malformed_line_is_pipeline_error(tmp_path, capsys):
    corpus = write_corpus(tmp_path, "the\tthe\tDET\nbad line\n")
    code = run(["extract", "--corpus", corpus, "--builtin-gold",
                "--out", str(tmp_path / "d.csv")])
    assert code == 1
    assert "line 2" in capsys.readouterr().err


def test_extract_needs_some_target_source(tmp_path, capsys):
    corpus = write_corpus(tmp_path)
    code = run(["extract", "--corpus", corpus, "--out", str(tmp_path / "d.csv")])
    assert code == 2


def test_extract_with_lemma_list(tmp_path, capsys):
    corpus = write_corpus(tmp_path)
    lemmas = tmp_path / "lemmas.txt"
    lemmas.write_text("war\nmap\nstorm\n")
    out = str(tmp_path / "dataset.csv")
    assert run(["extract", "--corpus", corpus, "--lemmas", str(lemmas),
                "--out", out]) == 0
    assert "lemmas: 3" in capsys.readouterr().out


def full_pipeline(tmp_path, capsys):
    synth_dir = str(tmp_path / "synth")
    assert run(["synth", "--lang", "EN", "--n-event", "30", "--n-non-event", "30",
                "--p-event", "0.6", "--p-non-event", "0.02",
                "--occ-min", "5", "--occ-max", "12",
                "--seed", "11", "--out", synth_dir]) == 0
    dataset = str(tmp_path / "dataset.csv")
    assert run(["extract", "--lang", "EN",
                "--corpus", os.path.join(synth_dir, "corpus.tsv"),
                "--gold", os.path.join(synth_dir, "gold.csv"),
                "--out", dataset]) == 0
    return synth_dir, dataset


def test_full_pipeline_train_classify_evaluate(tmp_path, capsys):
    synth_dir, dataset = full_pipeline(tmp_path, capsys)

    model = str(tmp_path / "model.json")
    tree_text = str(tmp_path / "model.txt")
    assert run(["train", "--dataset", dataset, "--lang", "EN",
                "--out", model, "--tree-text", tree_text]) == 0
    assert os.path.exists(model)
    assert "leaf" in open(tree_text).read()

    lexicon = str(tmp_path / "lexicon.csv")
    assert run(["classify", "--model", model, "--dataset", dataset,
                "--out", lexicon]) == 0
    with open(lexicon) as fh:
        rows = fh.read().splitlines()
    assert rows[0] == "lemma,predicted,confidence"
    assert len(rows) == 61  # header + one row per lemma
    confidences = [float(r.split(",")[2]) for r in rows[1:]]
    assert confidences == sorted(confidences, reverse=True)

    out_dir = str(tmp_path / "eval")
    assert run(["evaluate", "--dataset", dataset, "--k", "5", "--seed", "3",
                "--threshold", "0.8", "--out", out_dir]) == 0
    captured = capsys.readouterr().out
    assert "mean accuracy:" in captured
    for name in ("report.txt", "predictions.csv", "curve.csv",
                 "confusion.csv", "accepted.csv", "to_review.csv"):
        assert os.path.exists(os.path.join(out_dir, name)), name

    with open(os.path.join(out_dir, "accepted.csv")) as fh:
        accepted_rows = sum(1 for _ in fh) - 1
    with open(os.path.join(out_dir, "to_review.csv")) as fh:
        review_rows = sum(1 for _ in fh) - 1
    assert accepted_rows + review_rows == 60

    curve_out = str(tmp_path / "curve2.csv")
    assert run(["curve", "--predictions",
                os.path.join(out_dir, "predictions.csv"),
                "--out", curve_out]) == 0
    assert open(curve_out).readline().strip() == "threshold,precision,retained"


def test_classify_dimension_mismatch(tmp_path, capsys):
    synth_dir, dataset = full_pipeline(tmp_path, capsys)
    model = str(tmp_path / "model.json")
    assert run(["train", "--dataset", dataset, "--out", model]) == 0

    es_synth = str(tmp_path / "es")
    assert run(["synth", "--lang", "ES", "--n-event", "5", "--n-non-event", "5",
                "--seed", "2", "--out", es_synth]) == 0
    es_dataset = str(tmp_path / "es_dataset.csv")
    assert run(["extract", "--lang", "ES",
                "--corpus", os.path.join(es_synth, "corpus.tsv"),
                "--gold", os.path.join(es_synth, "gold.csv"),
                "--out", es_dataset]) == 0

    code = run(["classify", "--model", model, "--dataset", es_dataset,
                "--out", str(tmp_path / "lex.csv")])
    assert code == 1
    err = capsys.readouterr().err
    assert "16" in err and "11" in err


def test_evaluate_from_corpus_and_gold(tmp_path, capsys):
    corpus = write_corpus(tmp_path)
    gold = write_gold(tmp_path, [("war", "EVENT"), ("map", "NON_EVENT"),
                                 ("storm", "EVENT"), ("tree", "NON_EVENT")])
    out_dir = str(tmp_path / "eval")
    assert run(["evaluate", "--lang", "EN", "--corpus", corpus, "--gold", gold,
                "--k", "2", "--seed", "1", "--out", out_dir]) == 0
    assert os.path.exists(os.path.join(out_dir, "report.txt"))


def test_evaluate_requires_seed(tmp_path):
    corpus = write_corpus(tmp_path)
    assert run(["evaluate", "--corpus", corpus, "--builtin-gold"]) == 2


def test_evaluate_deterministic_outputs(tmp_path, capsys):
    synth_dir, dataset = full_pipeline(tmp_path, capsys)
    outs = []
    for name in ("run_a", "run_b"):
        out_dir = str(tmp_path / name)
        assert run(["evaluate", "--dataset", dataset, "--k", "5", "--seed", "17",
                    "--threshold", "0.8", "--out", out_dir]) == 0
        outs.append(out_dir)
    for name in ("report.txt", "predictions.csv", "curve.csv",
                 "confusion.csv", "accepted.csv", "to_review.csv"):
        a = open(os.path.join(outs[0], name), "rb").read()
        b = open(os.path.join(outs[1], name), "rb").read()
        assert a == b, name


def test_synth_deterministic(tmp_path):
    for name in ("one", "two"):
        assert run(["synth", "--seed", "5", "--n-event", "10",
                    "--n-non-event", "10", "--out", str(tmp_path / name)]) == 0
    a = (tmp_path / "one" / "corpus.tsv").read_bytes()
    b = (tmp_path / "two" / "corpus.tsv").read_bytes()
    assert a == b


def test_builtin_gold_requires_english(tmp_path, capsys):
    corpus = write_corpus(tmp_path)
    code = run(["extract", "--lang", "ES", "--corpus", corpus,
                "--builtin-gold", "--out", str(tmp_path / "d.csv")])
    assert code == 2


def test_extract_with_custom_cue_file_and_relative(tmp_path, capsys):
    corpus = write_corpus(tmp_path)
    cues = tmp_path / "rules.tsv"
    cues.write_text("X-1\tpositive\tlemma=during tag=DET? TARGET\n")
    gold = write_gold(tmp_path, [("war", "EVENT"), ("map", "NON_EVENT")])
    out = str(tmp_path / "dataset.csv")
    assert run(["extract", "--lang", "EN", "--corpus", corpus,
                "--cues", str(cues), "--gold", gold, "--relative",
                "--out", out]) == 0
    header, war_row = open(out).read().splitlines()[:2]
    assert header == "lemma,total,X-1,label"
    assert war_row == "map,1,0,NON_EVENT" or war_row.startswith("map")
    rows = dict(line.split(",", 1) for line in open(out).read().splitlines()[1:])
    # war occurs twice, matched once by X-1: relative count 0.5
    assert rows["war"] == "2,0.5,EVENT"


def test_extract_last_noun_policy(tmp_path):
    corpus = write_corpus(
        tmp_path, "during\tduring\tADP\nthe\tthe\tDET\nworld\tworld\tNOUN\n"
                  "war\twar\tNOUN\n")
    gold = write_gold(tmp_path, [("war", "EVENT"), ("world", "NON_EVENT")])
    out_first = str(tmp_path / "first.csv")
    out_last = str(tmp_path / "last.csv")
    assert run(["extract", "--corpus", corpus, "--gold", gold,
                "--out", out_first]) == 0
    assert run(["extract", "--corpus", corpus, "--gold", gold, "--last-noun",
                "--out", out_last]) == 0

    def en1_count(path, lemma):
        lines = open(path).read().splitlines()
        index = lines[0].split(",").index("EN-1")
        for line in lines[1:]:
            fields = line.split(",")
            if fields[0] == lemma:
                return fields[index]
        raise AssertionError(lemma)

    assert en1_count(out_first, "world") == "1"
    assert en1_count(out_first, "war") == "0"
    assert en1_count(out_last, "world") == "0"
    assert en1_count(out_last, "war") == "1"


def test_train_rejects_unlabeled_dataset(tmp_path, capsys):
    corpus = write_corpus(tmp_path)
    lemmas = tmp_path / "lemmas.txt"
    lemmas.write_text("war\nmap\n")
    dataset = str(tmp_path / "unlabeled.csv")
    assert run(["extract", "--corpus", corpus, "--lemmas", str(lemmas),
                "--out", dataset]) == 0
    code = run(["train", "--dataset", dataset, "--out", str(tmp_path / "m.json")])
    assert code == 1
    assert "label" in capsys.readouterr().err


def test_classify_rejects_non_model_file(tmp_path, capsys):
    corpus = write_corpus(tmp_path)
    lemmas = tmp_path / "lemmas.txt"
    lemmas.write_text("war\n")
    dataset = str(tmp_path / "d.csv")
    assert run(["extract", "--corpus", corpus, "--lemmas", str(lemmas),
                "--out", dataset]) == 0
    bogus = tmp_path / "model.json"
    bogus.write_text('{"format": "something-else"}')
    assert run(["classify", "--model", str(bogus), "--dataset", dataset,
                "--out", str(tmp_path / "l.csv")]) == 1
