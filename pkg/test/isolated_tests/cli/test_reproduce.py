import math

from entropygraph.cli.reproduce import (
    CRITERIA,
    run_acceptance_checks,
    worked_psi_check,
)


def test_worked_psi_check_passes():
    passed, detail = worked_psi_check()
    assert passed
    assert detail == 'psi=4, relabeled=[4]'


def test_worked_psi_check_catches_a_wrong_exponent():
    def psi_without_shift(ot, degrees):
        return math.prod(int(degrees[x]) ** b for x, b in zip(ot.placement, ot.tree.b))

    passed, detail = worked_psi_check(psi_without_shift)
    assert not passed
    assert detail.startswith('psi=144')


def test_criteria_names_are_unique():
    names = [name for _, name, _, _ in CRITERIA]
    assert len(names) == len(set(names))
    assert [hard for _, _, hard, _ in CRITERIA].count(False) == 2


def test_selected_criteria_publish(mock_pubsub, settings):
    results = run_acceptance_checks(seed=1, workers=1, settings=settings,
                                    event_bus=mock_pubsub,
                                    criteria=['psi_worked_example', 'cayley_counts'])
    assert [r.name for r in results] == ['psi_worked_example', 'cayley_counts']
    assert all(r.passed and r.hard for r in results)
    assert [topic for topic, _ in mock_pubsub.sent] == ['ACCEPTANCE.CRITERION'] * 2
    assert mock_pubsub.sent[0][1]['criterion'] == 1


def test_criteria_are_seed_deterministic(mock_pubsub, settings):
    first = run_acceptance_checks(seed=4, workers=2, settings=settings, event_bus=mock_pubsub,
                                  criteria=['cayley_counts', 'rounding'])
    second = run_acceptance_checks(seed=4, workers=1, settings=settings,
                                   event_bus=mock_pubsub,
                                   criteria=['cayley_counts', 'rounding'])
    assert first == second
