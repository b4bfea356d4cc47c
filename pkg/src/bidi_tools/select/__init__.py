from .stepwise import StepwiseStep, StepwiseTrace, backward_stepwise

__all__ = ["StepwiseStep", "StepwiseTrace", "backward_stepwise"]
