# exercise: return_values
# pattern: argument-count
def add(num1, num2):
    return num1 + num2

result = add(2)
print(result)
