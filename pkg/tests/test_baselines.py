from fractions import Fraction

import pytest

import published
from qdiv.baselines import (
    DISCREPANCY_NOTES, MODELS, TABLE_IDS, improvement, improvement_exact, model_qubits,
    model_tcount, model_tdepth, reproduce_table,
)


def test_model_examples():
    assert model_tcount("khosropour", 4) == 6400
    assert model_tcount("jamal2", 4) == 784
    assert model_tcount("proposed_nonrestoring", 512) == 3673565
    assert model_qubits("jamal1", 4) == 51
    assert model_qubits("dibbo", 8) == 288
    assert model_qubits("proposed_restoring", 4) == 12


def test_tdepth_models():
    assert model_tdepth("khosropour", 4) == 520
    assert model_tdepth("proposed_restoring", 4) == 92
    assert model_tdepth("proposed_nonrestoring", 4) == 53
    for d in ("dibbo", "jamal1", "jamal2"):
        assert model_tdepth(d, 4) is None


def test_models_positive_for_small_n():
    for d in MODELS:
        for n in range(2, 40):
            assert model_tcount(d, n) > 0
            assert model_qubits(d, n) > 0


def test_models_reject_small_n_and_unknown_designs():
    with pytest.raises(ValueError):
        model_tcount("dibbo", 1)
    with pytest.raises(ValueError):
        model_qubits("nobody", 4)


def test_improvement_examples():
    assert improvement(6400, 448) == 93.00
    assert improvement(104, 11) == 89.42
    assert improvement(77, 77) == 0.00
    assert improvement_exact(4, 1) == Fraction(75)
    with pytest.raises(ValueError):
        improvement(0, 1)


def test_improvement_rounds_half_up():
    # 1 - 1/8 = 87.5%, 1 - 5/16 = 68.75%, 1 - 1/1600 = 99.9375%
    assert improvement(8, 1) == 87.5
    assert improvement(16, 5) == 68.75
    assert improvement(1600, 1) == 99.94


@pytest.mark.parametrize("table_id", sorted(published.TABLES))
def test_model_columns_match_printed_rows_exactly(table_id):
    table = reproduce_table(table_id)
    printed = published.TABLES[table_id][0]
    k = (len(table.columns) - 2) // 2
    for n, expect in printed.items():
        got = table.row_for(n)
        assert tuple(got[: k + 1]) == expect[: k + 1]


@pytest.mark.parametrize("table_id", sorted(published.TABLES))
def test_improvements_match_printed_rows(table_id):
    table = reproduce_table(table_id)
    printed = published.TABLES[table_id][0]
    k = (len(table.columns) - 2) // 2
    for n, expect in printed.items():
        got = table.row_for(n)[k + 1:]
        for g, e in zip(got, expect[k + 1:]):
            assert abs(g - e) <= 0.05, (n, g, e)


def test_row_examples():
    assert reproduce_table("restoring-tcount").row_for(16) == [102400, 36864, 8512, 91.69, 76.91]
    assert reproduce_table("nonrestoring-qubits").row_for(64) == [
        8511, 13184, 131328, 191, 97.76, 98.55, 99.85]


def test_average_rows_that_agree_with_their_columns():
    assert reproduce_table("restoring-tcount").average_values() == [91.69, 79.03]
    assert reproduce_table("nonrestoring-tcount").average_values() == [49.75, 67.74, 90.37]
    assert reproduce_table("nonrestoring-qubits").average_values() == [93.52, 96.46, 95.76]


def test_printed_dibbo_qubit_average_disagrees_with_its_own_column():
    # Averaging the eight printed percentages gives 95.45, not the printed 93.94.
    printed = [row[4] for row in published.RESTORING_QUBITS.values()]
    assert round(sum(printed) / len(printed), 2) == 95.45
    assert reproduce_table("restoring-qubits").average_values() == [25.00, 95.45]


def test_largest_dibbo_qubit_improvement_rounds_to_100():
    assert reproduce_table("nonrestoring-qubits").row_for(512)[-1] == 100.00
    assert reproduce_table("nonrestoring-qubits").row_for(512)[4:6] == [99.71, 99.81]


def test_measured_proposed_column_agrees_with_formula():
    for table_id in ("restoring-tcount", "nonrestoring-tcount",
                     "restoring-qubits", "nonrestoring-qubits"):
        table = reproduce_table(table_id, measure_upto=32)
        assert table.mismatches == []
        assert table.rows == reproduce_table(table_id).rows


def test_summary_tables():
    t = reproduce_table("summary-restoring")
    md = t.to_markdown()
    assert "35·n²−28·n" in md and "23·n" in md and "3·n" in md
    t = reproduce_table("summary-nonrestoring")
    assert t.rows[0][-1] == "14·n²+7·n−35"
    assert t.rows[1][1:4] == ["NA", "NA", "NA"]


def test_csv_rendering():
    lines = reproduce_table("restoring-tcount").to_csv().splitlines()
    assert lines[1] == "4,~6400,~576,448,93.00,22.22"
    assert lines[-1] == "Average:,,,,91.69,79.03"


def test_every_table_id_renders():
    for table_id in TABLE_IDS:
        t = reproduce_table(table_id)
        assert t.to_markdown().startswith("**")
        assert t.to_csv()
    with pytest.raises(ValueError):
        reproduce_table("table-9")


def test_discrepancy_notes_present():
    assert len(DISCREPANCY_NOTES) >= 5
    assert any("93.94" in note for note in DISCREPANCY_NOTES)
