public class ImmunizationInsuranceAction {
    public void cancelImmunization(Immunization immunization) {
        immunizationStore.cancel(immunization);
    }
    public void cancelImmunization(Immunization immunization) {
        immunizationStore.cancel(immunization);
    }
}
