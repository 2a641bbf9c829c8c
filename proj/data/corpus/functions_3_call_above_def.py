# exercise: functions
# pattern: call-before-definition
greet("Ada")

def greet(name):
    print(f"Hello, {name}!")
