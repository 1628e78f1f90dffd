"""
InterpIQ Test Suite

Unit, property and CLI tests for the Hardy-Orlicz interpolation lab.
"""
