from src.pipeline_module import service
from src.pipeline_module.render import Render


def test_byol_rows():
    rows = Render.to_inspect_rows(service.preset('BYOL'))
    assert len(rows) == 6
    assert (rows[0]['id'], rows[0]['probability'], rows[0]['transformation']) == ('B00', 1.0, 'Crop and resize')
    assert rows[0]['parameters']['area'] == [0.08, 1.0]


def test_augus_o_rows():
    rows = Render.to_inspect_rows(service.preset('AugUS-O'))
    assert [row['order'] for row in rows] == list(range(12))
    assert rows[-1]['transformation'] == 'Rotation & shift'


def test_table():
    lines = Render.to_table(service.preset('BYOL')).splitlines()
    assert lines[0] == '# BYOL (seed 0, 2 views)'
    assert lines[1].split() == ['Identifier', 'Probability', 'Transformation', 'Parameters']
    assert lines[2].startswith('B00')
    assert 'area=[0.08, 1]' in lines[2]
    assert len(lines) == 8


def test_table_survives_a_config_file(tmp_path):
    config = service.with_seed(service.preset('AugUS-D'), 17)
    path = tmp_path / 'augus-d.json'
    path.write_text(service.dump_config(config))
    assert Render.to_table(service.resolve(str(path))) == Render.to_table(config)


def test_format_bound():
    assert Render.format_bound(True) == 'true'
    assert Render.format_bound(['db2', 'db5']) == '[db2, db5]'
    assert Render.format_bound([-0.2, 0.2]) == '[-0.2, 0.2]'
