# exercise: return_values
# pattern: use-before-assignment
def add(num1, num2):
    total = total + num1 + num2
    return total

result = add(2, 6)
print(result)
