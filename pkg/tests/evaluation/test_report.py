from __future__ import absolute_import, division, print_function

import json
import os.path

import pandas
import pytest

from orthomatch.errors import ReportError
from orthomatch.evaluation.report import EvalReport


def mma_record(pair_id, theta, accuracy, empty=False):
    return {'id': pair_id, 'theta': theta, 'matches': 0 if empty else 10,
            'accuracy': accuracy, 'empty': empty}


@pytest.fixture
def mma_report():
    records = [mma_record('a', 0.0, [0.5, 1.0]),
               mma_record('b', 90.0, [0.0, 0.5]),
               mma_record('c', 90.0, [0.0, 0.0], empty=True)]
    return EvalReport('mma', {'mma': {'thresholds': [1.0, 2.0]}},
                      {'pipeline': 0}, records)


def test_mma_aggregates(mma_report):
    a = mma_report.aggregates
    assert a['pairs'] == 3
    assert a['empty_pairs'] == 1
    assert a['mma'] == pytest.approx([0.5 / 3, 0.5])
    assert a['mma_standard'] == pytest.approx([0.5, 1.0])
    assert a['mma_rotated'] == pytest.approx([0.0, 0.25])
    assert a['mma_average'] == pytest.approx([0.25, 0.625])
    assert sorted(a['mma_per_theta']) == ['0.0', '90.0']
    assert a['mma_per_theta']['90.0'] == pytest.approx([0.0, 0.25])


def test_report_round_trip(tmpdir, mma_report):
    path = os.path.join(str(tmpdir), 'report.json')
    mma_report.write(path)
    loaded = EvalReport.load(path)
    assert loaded.kind == 'mma'
    assert loaded.records == mma_report.records
    assert loaded.aggregates == mma_report.aggregates
    assert loaded.tool_version == mma_report.tool_version


def test_tampered_report(tmpdir, mma_report):
    data = json.loads(json.dumps(mma_report.to_json()))
    data['aggregates']['mma'][0] = 0.9
    with pytest.raises(ReportError):
        EvalReport.from_json(data)
    data = json.loads(json.dumps(mma_report.to_json()))
    data['schema_version'] = 99
    with pytest.raises(ReportError):
        EvalReport.from_json(data)
    data = json.loads(json.dumps(mma_report.to_json()))
    del data['records']
    with pytest.raises(ReportError):
        EvalReport.from_json(data)


def test_mma_curves(tmpdir, mma_report):
    frame = mma_report.curves()
    assert frame['threshold'].tolist() == [1.0, 2.0]
    assert frame['mma_theta_90.0'].tolist() == pytest.approx([0.0, 0.25])
    path = os.path.join(str(tmpdir), 'curves.csv')
    mma_report.write_curves(path)
    assert pandas.read_csv(path).shape == frame.shape
    assert mma_report.summary()[0] == 'pairs: 3 (empty: 1)'


def test_pose_report():
    records = [
        {'sequence': 's1', 'failed': False, 'angular_error': 2.0,
         'translation_error': 0.1},
        {'sequence': 's1', 'failed': False, 'angular_error': 4.0,
         'translation_error': 0.3},
        {'sequence': 's2', 'failed': True, 'angular_error': None,
         'translation_error': None},
    ]
    report = EvalReport('pose', {}, {}, records)
    a = report.aggregates
    assert a['failure_rate'] == pytest.approx(1 / 3)
    assert a['mean_angular_error'] == pytest.approx(3.0)
    assert a['median_translation_error'] == pytest.approx(0.2)
    assert a['per_sequence']['s2']['mean_angular_error'] is None
    assert a['per_sequence']['s1']['failures'] == 0
    curve = report.curves()
    assert curve['fraction'].tolist()[:5] == [0.0, 0.0, 0.5, 0.5, 1.0]
    json.dumps(report.to_json())


def test_vpr_report():
    records = [
        {'correct': True, 'no_candidates': False,
         'correct_at': {'7.0': True, '30.0': True}},
        {'correct': False, 'no_candidates': True,
         'correct_at': {'7.0': False, '30.0': False}},
    ]
    report = EvalReport('vpr', {'vpr': {'report_radii': [7.0, 30.0]}}, {},
                        records)
    assert report.aggregates['recall'] == 0.5
    assert report.aggregates['flagged'] == 1
    assert report.curves()['radius'].tolist() == [7.0, 30.0]
    assert report.summary()[1] == 'recall: 0.5000'


def test_unknown_kind():
    with pytest.raises(ReportError):
        EvalReport('speed', {}, {}, [])
