import json
import logging
import random
import sys

import pytest

from pipestudio.corpus import (
    COMPLETE,
    HYBRID,
    MASKED,
    NAME,
    NlCodePair,
    dedupe_pairs,
    extract_invocations,
    formulate_corpus,
    formulate_pair,
    ground_explicit_values,
    has_sklearn,
    is_english,
    mine_directory,
    pair_cells,
    param_stats,
    parse_notebook,
    render_param_stats,
    split_corpus,
)
from pipestudio.corpus.notebooks import NotebookCell
from pipestudio.dsl import parse_invocation, parse_invocation_lines


def nb_doc(cells):
    return json.dumps({"cells": cells})


def md(source):
    return {"cell_type": "markdown", "source": source}


def code(source):
    return {"cell_type": "code", "source": source}


# -- parse_notebook ------------------------------------------------------------

def test_parse_notebook_orders_and_joins():
    doc = nb_doc([md(["# Title\n", "text"]), code("x = 1")])
    cells = parse_notebook(doc)
    assert [c.kind for c in cells] == ["markdown", "code"]
    assert cells[0].source == "# Title\ntext"
    assert [c.index for c in cells] == [0, 1]


def test_parse_notebook_empty():
    assert parse_notebook(nb_doc([])) == []


def test_parse_notebook_skips_raw_with_warning(caplog):
    with caplog.at_level(logging.WARNING):
        cells = parse_notebook(nb_doc([{"cell_type": "raw", "source": "x"}, code("y = 1")]))
    assert len(cells) == 1
    assert "unknown kind 'raw'" in caplog.text


def test_parse_notebook_malformed():
    with pytest.raises(ValueError):
        parse_notebook("{broken")
    with pytest.raises(ValueError):
        parse_notebook(json.dumps({"not_cells": []}))


# -- filters --------------------------------------------------------------------

def test_has_sklearn_by_import(registry):
    cells = [NotebookCell("code", "from sklearn.decomposition import PCA", 0)]
    assert has_sklearn(cells, registry)


def test_has_sklearn_by_registry_call_without_import(registry):
    cells = [NotebookCell("code", "model = PCA(n_components=2)", 0)]
    assert has_sklearn(cells, registry)


def test_has_sklearn_false_for_plotting(registry):
    cells = [NotebookCell("code", "import matplotlib.pyplot as plt\nplt.plot(x)", 0)]
    assert not has_sklearn(cells, registry)


def test_is_english_accepts_plain_sentence():
    assert is_english([NotebookCell("markdown", "Build a model", 0)])


def test_is_english_rejects_cyrillic():
    assert not is_english([NotebookCell("markdown", "Обучение модели на данных", 0)])


def test_is_english_vacuous_without_markdown():
    assert not is_english([NotebookCell("code", "the = 1", 0)])


def test_is_english_requires_stopword():
    assert not is_english([NotebookCell("markdown", "Gradient boosting hyperparameters", 0)])


# -- pairing ----------------------------------------------------------------------

def test_pair_nearest_preceding_markdown(registry):
    cells = parse_notebook(nb_doc([
        md("Model # 2 - Decision Trees"),
        code("from sklearn.tree import DecisionTreeClassifier\nDecisionTreeClassifier()"),
    ]))
    pairs = pair_cells(cells, registry)
    assert len(pairs) == 1
    assert pairs[0][0].source == "Model # 2 - Decision Trees"


def test_two_code_cells_share_markdown(registry):
    cells = parse_notebook(nb_doc([
        md("Preprocess the data"),
        code("from sklearn.preprocessing import StandardScaler\nStandardScaler()"),
        code("from sklearn.preprocessing import MinMaxScaler\nMinMaxScaler()"),
    ]))
    pairs = pair_cells(cells, registry)
    assert len(pairs) == 2
    assert pairs[0][0] is pairs[1][0]


def test_code_without_markdown_dropped(registry):
    cells = parse_notebook(nb_doc([code("from sklearn.decomposition import PCA\nPCA()")]))
    assert pair_cells(cells, registry) == []


# -- extraction --------------------------------------------------------------------

def test_extract_constructor_not_method_calls(registry):
    source = "clf = RandomForestClassifier(n_estimators=100, class_weight='balanced')\nclf.fit(X, y)"
    invocations = extract_invocations(source, registry)
    assert [i.render() for i in invocations] == [
        "RandomForestClassifier(n_estimators=100, class_weight='balanced')"
    ]


def test_extract_positional_arguments(registry):
    invocations = extract_invocations("train_test_split(X, y, test_size=0.2)", registry)
    assert [i.render() for i in invocations] == ["train_test_split(X, y, test_size=0.2)"]
    args = invocations[0].args
    assert args[0].positional and args[0].value.kind == "expr"
    assert args[2].value.value == 0.2


def test_extract_method_only_cell_is_empty(registry):
    assert extract_invocations("clf.fit(X, y)", registry) == []


def test_extract_masks_non_literal_keyword_values(registry):
    invocations = extract_invocations("PCA(n_components=n, random_state=rng())", registry)
    assert invocations[0].render() == "PCA(n_components=MASK, random_state=MASK)"


def test_extract_skips_unbalanced_call(registry, caplog):
    with caplog.at_level(logging.WARNING):
        invocations = extract_invocations("OneHotEncoder(", registry)
    assert invocations == []
    assert "unbalanced" in caplog.text


def test_extract_ignores_comments_and_magics(registry):
    source = "# PCA(n_components=9)\n%timeit StandardScaler()\nPCA(n_components=2)"
    invocations = extract_invocations(source, registry)
    assert [i.render() for i in invocations] == ["PCA(n_components=2)"]


def test_extract_nested_known_calls(registry):
    invocations = extract_invocations("GridSearchCV(RandomForestClassifier(), params)", registry)
    assert [i.operator for i in invocations] == ["GridSearchCV", "RandomForestClassifier"]


# -- dedupe -------------------------------------------------------------------------

def _pair(nl, target_code, registry, nb="nb", cell=0):
    return NlCodePair(nl, tuple(extract_invocations(target_code, registry)), nb, cell)


def test_dedupe_keeps_first(registry):
    a = _pair("Scale", "StandardScaler()", registry, cell=0)
    b = _pair("Scale", "StandardScaler()", registry, cell=5)
    out = dedupe_pairs([a, b])
    assert out == [a]


def test_dedupe_same_nl_different_code(registry):
    a = _pair("Scale", "StandardScaler()", registry)
    b = _pair("Scale", "MinMaxScaler()", registry)
    assert dedupe_pairs([a, b]) == [a, b]


def test_dedupe_same_code_different_nl(registry):
    a = _pair("Scale it", "StandardScaler()", registry)
    b = _pair("Standardize", "StandardScaler()", registry)
    assert dedupe_pairs([a, b]) == [a, b]


# -- grounding and formulation --------------------------------------------------------

def test_grounding_keeps_stated_string(registry):
    inv = parse_invocation("RandomForestClassifier(n_estimators=100, class_weight='balanced')")
    out = ground_explicit_values("Random forest with balanced class weight", inv)
    assert out.render() == "RandomForestClassifier(n_estimators=MASK, class_weight='balanced')"


def test_grounding_keeps_stated_number(registry):
    inv = parse_invocation("PCA(n_components=2, random_state=42)")
    out = ground_explicit_values("PCA with 2 components", inv)
    assert out.render() == "PCA(n_components=2, random_state=MASK)"


def test_grounding_no_args_unchanged(registry):
    inv = parse_invocation("OneHotEncoder()")
    assert ground_explicit_values("Encoding categorical features", inv).render() == "OneHotEncoder()"


def test_grounding_decimal_number():
    inv = parse_invocation("train_test_split(X, y, test_size=0.2)")
    out = ground_explicit_values("split with test size of 0.2", inv)
    assert out.render() == "train_test_split(MASK, MASK, test_size=0.2)"


def test_grounding_booleans_never_stated():
    inv = parse_invocation("LogisticRegression(fit_intercept=True)")
    out = ground_explicit_values("logistic regression with fit_intercept True", inv)
    assert out.render() == "LogisticRegression(fit_intercept=MASK)"


def test_grounding_is_token_level_not_substring():
    inv = parse_invocation("PCA(n_components=2)")
    out = ground_explicit_values("take 20 samples", inv)  # "2" must not match inside "20"
    assert out.render() == "PCA(n_components=MASK)"


def test_all_task_rows_reproduce(task_rows, registry):
    for row in task_rows:
        invocations = extract_invocations(row["code"], registry)
        pair = NlCodePair(row["nl"], tuple(invocations), "fixture", 0)
        for task in (NAME, COMPLETE, MASKED, HYBRID):
            sample = formulate_pair(pair, task)
            assert sample.target == row[task], (row["nl"], task)


def test_multi_invocation_targets_joined(registry):
    pair = _pair("Model # 2 - Decision Trees",
                 "DecisionTreeClassifier()\nconfusion_matrix(y_true, y_pred)", registry)
    assert formulate_pair(pair, NAME).target == "DecisionTreeClassifier ; confusion_matrix"
    assert formulate_pair(pair, COMPLETE).target == (
        "DecisionTreeClassifier()\nconfusion_matrix(y_true, y_pred)"
    )


def test_mask_restoration_round_trip_property(registry):
    rng = random.Random(5150)
    operators = ["PCA", "KMeans", "SVC", "StandardScaler", "train_test_split"]
    words = ["alpha", "beta", "gamma", "delta", "use", "with", "components"]
    checked = 0
    for _ in range(220):
        op = rng.choice(operators)
        parts, literals = [], []
        for j in range(rng.randint(0, 4)):
            value = rng.choice(["3", "0.5", "'mean'", "'sub word'", "True", "None", "7"])
            parts.append(f"p{j}={value}")
            literals.append(value)
        source = f"{op}({', '.join(parts)})"
        nl = " ".join(rng.sample(words, 3)) + " " + " ".join(
            rng.sample(literals, min(len(literals), rng.randint(0, 2)))
        ).replace("'", "")
        pair = NlCodePair(nl.strip() or "query", tuple(extract_invocations(source, registry)), "gen", 0)
        complete = formulate_pair(pair, COMPLETE).target
        hybrid = formulate_pair(pair, HYBRID).target

        restored_invocations = []
        for h, c in zip(parse_invocation_lines(hybrid), parse_invocation_lines(complete)):
            args = []
            for ha, ca in zip(h.args, c.args):
                args.append(ca if ha.value.is_mask else ha)
            restored_invocations.append(h.__class__(h.operator, tuple(args)))
        restored = "\n".join(i.render() for i in restored_invocations)
        assert restored == complete
        checked += 1
    assert checked >= 200


# -- splits ---------------------------------------------------------------------------

def _samples(n, registry):
    pairs = [_pair(f"query {i}", "StandardScaler()", registry, cell=i) for i in range(n)]
    return formulate_corpus(pairs, HYBRID)


def test_split_sizes_simple(registry):
    splits = split_corpus(_samples(100, registry), (0.8, 0.1, 0.1), seed=7)
    assert splits.sizes() == (80, 10, 10)


def test_split_deterministic(registry):
    samples = _samples(50, registry)
    a = split_corpus(samples, (0.8, 0.1, 0.1), seed=3)
    b = split_corpus(samples, (0.8, 0.1, 0.1), seed=3)
    assert [s.nl for s in a.train] == [s.nl for s in b.train]
    assert [s.nl for s in a.test] == [s.nl for s in b.test]


def test_split_ten_samples_default_ratios(registry):
    splits = split_corpus(_samples(10, registry), (0.88, 0.06, 0.06), seed=1)
    assert splits.sizes() == (8, 1, 1)


def test_split_disjoint_union(registry):
    samples = _samples(23, registry)
    splits = split_corpus(samples, (0.6, 0.2, 0.2), seed=9)
    ids = [s.cell for s in splits.train + splits.valid + splits.test]
    assert sorted(ids) == list(range(23))


def test_split_rejects_bad_ratios(registry):
    with pytest.raises(ValueError):
        split_corpus(_samples(5, registry), (0.5, 0.2, 0.2), seed=0)
    with pytest.raises(ValueError):
        split_corpus([], (0.8, 0.1, 0.1), seed=0)


# -- param stats ------------------------------------------------------------------------

def test_param_stats_single_pca(registry):
    pair = _pair("PCA with 2 components", "PCA(n_components=2, random_state=rng)", registry)
    sample = formulate_pair(pair, HYBRID)
    stats = param_stats([sample])
    dist = stats["distribution"]
    assert dist["valued"]["1-3"] == 100.0
    assert dist["masked"]["1-3"] == 100.0
    assert dist["total"]["1-3"] == 100.0
    assert dist["named"]["1-3"] == 100.0


def test_param_stats_zero_buckets(registry):
    pair = _pair("Encoding categorical features", "OneHotEncoder()", registry)
    stats = param_stats([formulate_pair(pair, HYBRID)])
    for cat in ("total", "named", "masked", "valued"):
        assert stats["distribution"][cat]["0"] == 100.0


def test_param_stats_table_columns(registry):
    pair = _pair("PCA with 2 components", "PCA(n_components=2)", registry)
    table = render_param_stats(param_stats([formulate_pair(pair, HYBRID)]))
    header = table.splitlines()[0]
    assert header.split() == ["Parameter", "Type", "0", "1-3", "4+"]


def test_param_stats_positional_args_unnamed(registry):
    pair = _pair("Split the data", "train_test_split(X, y, test_size=0.2)", registry)
    stats = param_stats([formulate_pair(pair, HYBRID)])
    assert stats["distribution"]["named"]["1-3"] == 100.0  # only test_size is named
    assert stats["distribution"]["total"]["1-3"] == 100.0


def test_param_stats_rejects_non_hybrid(registry):
    pair = _pair("x", "PCA()", registry)
    with pytest.raises(ValueError, match="hybrid"):
        param_stats([formulate_pair(pair, COMPLETE)])


# -- end-to-end fixture -------------------------------------------------------------------

def test_mining_pipeline_order_invariance(registry):
    # dedupe-then-formulate equals formulate-then-dedupe on targets
    pairs = [
        _pair("Scale", "StandardScaler()", registry, cell=0),
        _pair("Scale", "StandardScaler()", registry, cell=1),
        _pair("Reduce", "PCA(n_components=2)", registry, cell=2),
    ]
    first = [s.target for s in formulate_corpus(dedupe_pairs(pairs), HYBRID)]
    formulated = formulate_corpus(pairs, HYBRID)
    seen, second = set(), []
    for pair, sample in zip(pairs, formulated):
        key = (pair.nl.strip(), sample.target)
        if key not in seen:
            seen.add(key)
            second.append(sample.target)
    assert first == second


def test_twelve_notebook_fixture_counts(registry, fixtures_dir):
    manifest = json.loads((fixtures_dir / "notebooks_manifest.json").read_text())
    pairs, counts = mine_directory(fixtures_dir / "notebooks", registry)
    got = counts.to_json()
    for key in ("notebooks", "with_sklearn", "english", "paired", "discarded", "pairs", "deduped"):
        assert got[key] == manifest[key], key
    samples = formulate_corpus(pairs, HYBRID)
    splits = split_corpus(samples, tuple(manifest["ratios"]), seed=manifest["seed"])
    assert splits.sizes() == (
        manifest["splits"]["train"], manifest["splits"]["valid"], manifest["splits"]["test"],
    )
    kept = [[p.notebook, p.cell, "\n".join(i.render() for i in p.invocations)] for p in pairs]
    assert kept == manifest["kept_pairs"]


def test_fixture_counts_match_independent_recount(registry, fixtures_dir):
    sys.path.insert(0, str(fixtures_dir))
    try:
        from recount_notebooks import recount
    finally:
        sys.path.pop(0)
    manifest = json.loads((fixtures_dir / "notebooks_manifest.json").read_text())
    oracle = recount(fixtures_dir / "notebooks",
                     fixtures_dir.parent.parent / "src" / "pipestudio" / "data" / "manifest.json")
    for key in ("notebooks", "with_sklearn", "english", "paired", "discarded", "pairs", "deduped"):
        assert oracle[key] == manifest[key], key
    assert oracle["splits"] == manifest["splits"]
