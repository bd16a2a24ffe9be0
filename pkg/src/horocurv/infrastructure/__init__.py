"""Infrastructure layer: metric models and report writers"""
