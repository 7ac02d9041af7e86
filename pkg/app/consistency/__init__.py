from .defect import additivity_residual, consistency_defect, defect_report, exceptional_two_time_measure

__all__ = ["additivity_residual", "consistency_defect", "defect_report", "exceptional_two_time_measure"]
