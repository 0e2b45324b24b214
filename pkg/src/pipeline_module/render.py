from typing import Any, Dict, List

from src.pipeline_module.catalog import CATALOG
from src.pipeline_module.schemas import PipelineConfig

COLUMNS = ('Identifier', 'Probability', 'Transformation', 'Parameters')


class Render:
    @staticmethod
    def format_bound(value: Any) -> str:
        if isinstance(value, bool):
            return str(value).lower()
        if isinstance(value, (list, tuple)):
            return '[' + ', '.join(Render.format_bound(v) for v in value) + ']'
        if isinstance(value, float):
            return f'{value:g}'
        return str(value)

    @staticmethod
    def to_inspect_rows(config: PipelineConfig) -> List[Dict[str, Any]]:
        return [{
            "order": index,
            "id": spec.transform_id,
            "probability": spec.probability,
            "transformation": CATALOG[spec.transform_id].name,
            "parameters": spec.bounds,
        } for index, spec in enumerate(config.transforms)]

    @staticmethod
    def to_details(config: PipelineConfig) -> Dict[str, Any]:
        return {
            "config": config.dict(by_alias=True),
            "rows": Render.to_inspect_rows(config),
        }

    @staticmethod
    def to_table(config: PipelineConfig) -> str:
        rows = [(row['id'], str(row['probability']), row['transformation'],
                 ' '.join(f'{key}={Render.format_bound(value)}' for key, value in row['parameters'].items()))
                for row in Render.to_inspect_rows(config)]
        widths = [max([len(COLUMNS[i])] + [len(row[i]) for row in rows]) for i in range(len(COLUMNS))]
        lines = [f'# {config.name} (seed {config.master_seed}, {config.views_per_image} views)',
                 '  '.join(column.ljust(width) for column, width in zip(COLUMNS, widths)).rstrip()]
        lines += ['  '.join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows]
        return '\n'.join(lines)
