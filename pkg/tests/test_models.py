import pytest

from isascore.errors import InputError
from isascore.models import AttackClass, AwarenessModel, load_model, save_model, uniform_model


def write_model(tmp_path, lines, header="@class application"):
    path = tmp_path / "m.model"
    path.write_text("\n".join([header] + lines) + "\n")
    return path


def test_already_normalized_model(tmp_path):
    path = write_model(tmp_path, ["B1\t0.5", "VC2\t0.5"])
    model = load_model(path)
    assert model.weights == {"B1": 0.5, "VC2": 0.5}
    assert model.attack_class is AttackClass.APPLICATION


def test_weights_normalized_on_load(tmp_path):
    path = write_model(tmp_path, ["B1\t2", "VC2\t2"])
    model = load_model(path)
    assert model.weights == {"B1": 0.5, "VC2": 0.5}


def test_unknown_criterion_named_in_error(tmp_path):
    path = write_model(tmp_path, ["XX9\t1"])
    with pytest.raises(InputError, match="unknown criterion XX9"):
        load_model(path)


def test_negative_weight_rejected(tmp_path):
    path = write_model(tmp_path, ["B1\t-1", "VC2\t2"])
    with pytest.raises(InputError, match="negative weight"):
        load_model(path)


def test_empty_model_rejected(tmp_path):
    path = write_model(tmp_path, [])
    with pytest.raises(InputError, match="no weights"):
        load_model(path)


def test_all_zero_weights_rejected():
    with pytest.raises(InputError, match="positive"):
        AwarenessModel(AttackClass.MITM, {"B1": 0.0, "B5": 0.0})


def test_duplicate_criterion_rejected(tmp_path):
    path = write_model(tmp_path, ["B1\t1", "B1\t2"])
    with pytest.raises(InputError, match="duplicate"):
        load_model(path)


def test_missing_class_header_rejected(tmp_path):
    path = tmp_path / "m.model"
    path.write_text("B1\t1\n")
    with pytest.raises(InputError, match="@class"):
        load_model(path)


def test_comments_and_blank_lines_ignored(tmp_path):
    path = tmp_path / "m.model"
    path.write_text("# weights\n@class mitm\n\nB5\t3\n# done\nN1\t1\n")
    model = load_model(path)
    assert model.weights == pytest.approx({"B5": 0.75, "N1": 0.25})
    assert model.attack_class is AttackClass.MITM


def test_zero_weight_entry_allowed(tmp_path):
    path = write_model(tmp_path, ["B1\t0", "VC2\t1"])
    model = load_model(path)
    assert model.weights == {"B1": 0.0, "VC2": 1.0}


def test_save_load_round_trip(tmp_path):
    model = uniform_model(AttackClass.PHISHING, ["B1", "B5", "VC1"])
    path = tmp_path / "round.model"
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.attack_class is AttackClass.PHISHING
    assert loaded.weights == pytest.approx(model.weights)


def test_uniform_model_covers_catalog():
    model = uniform_model(AttackClass.APPLICATION)
    assert len(model.weights) == 30
    assert sum(model.weights.values()) == pytest.approx(1.0)
