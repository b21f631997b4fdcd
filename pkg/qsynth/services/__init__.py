"""
Services package for the synthesis algorithms
"""
